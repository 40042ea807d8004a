#ifndef ROADSNAP_TIME_SELECTION_HPP
#define ROADSNAP_TIME_SELECTION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "roadsnap/error_metrics.hpp"
#include "roadsnap/network.hpp"

namespace roadsnap {

/// A choice of typical snapshots plus the assignment of every snapshot to
/// its typical. typical_ids is sorted, unique and indexes into the series;
/// assignment[i] is the typical id serving snapshot i.
struct TypicalSelection {
  std::vector<std::size_t> typical_ids;
  std::vector<std::size_t> assignment;
  std::string method_tag;
};

/// Throws ValidationError if the selection violates its invariants against a
/// series of n snapshots.
void validate_selection(const TypicalSelection& selection, std::size_t n);

/// Every step-th snapshot starting at `offset` (offset < step). Snapshots
/// are assigned to the nearest typical by timestamp, ties to the earlier
/// one. step == 1 selects everything and has zero assignment error.
TypicalSelection uniform_sample(const SnapshotSeries& series, std::size_t step,
                                std::size_t offset);

/// Error-bounded sliding-window sampling. Snapshots are visited in timestamp
/// order and appended to the current window; the window's candidate typical
/// is the member minimizing its maximum error against the other members
/// (ground truth on the second argument, candidate on the first). While that
/// minimum stays <= epsilon the window grows; otherwise the window is
/// finalized without the overflowing snapshot, which starts the next window.
/// Ties between equally good candidates go to the earliest member. Every
/// finalized multi-member window's representative therefore has max error
/// <= epsilon over the window.
TypicalSelection nonuniform_sample(const SnapshotSeries& series, double epsilon,
                                   const QuerySet& queries);

}  // namespace roadsnap

#endif  // ROADSNAP_TIME_SELECTION_HPP
