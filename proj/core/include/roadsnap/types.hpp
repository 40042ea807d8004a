#ifndef ROADSNAP_TYPES_HPP
#define ROADSNAP_TYPES_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace roadsnap {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kInvalidEdge = std::numeric_limits<EdgeId>::max();

/// Raised when an input file cannot be parsed. Messages carry the file and
/// 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when parsed data violates a structural invariant (dangling vertex
/// reference, non-positive weight, asymmetric distance matrix, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an operation is invoked with artifacts that do not fit
/// together (e.g. matching against a catalog that lacks the representation's
/// typical paths).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace roadsnap

#endif  // ROADSNAP_TYPES_HPP
