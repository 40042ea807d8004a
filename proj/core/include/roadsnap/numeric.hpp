#ifndef ROADSNAP_NUMERIC_HPP
#define ROADSNAP_NUMERIC_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace roadsnap {

/// Pairwise (tree) summation. Deterministic regardless of how callers chunk
/// the work, and accurate to ~1e-15 relative on well-scaled data.
double pairwise_sum(std::span<const double> values);

struct MeanStddev {
  double mean = 0.0;
  double stddev = 0.0;  // population form (divide by n)
};

/// Population mean/stddev. Constant inputs yield stddev == 0 exactly; the
/// two-pass formula would otherwise leak rounding noise into the "no
/// variation" case, which downstream code tests against zero.
MeanStddev population_stats(std::span<const double> values);

/// Nearest-rank percentile of an unsorted sample, pct in [0, 100].
double percentile(std::vector<double> values, double pct);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

}  // namespace roadsnap

#endif  // ROADSNAP_NUMERIC_HPP
