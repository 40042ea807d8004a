#include "roadsnap/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roadsnap {

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanStddev population_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("population_stats: empty input");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return {*lo, 0.0};
  const double mean = pairwise_sum(values) / static_cast<double>(values.size());
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  if (pct < 0.0 || pct > 100.0) throw std::invalid_argument("percentile: pct out of [0,100]");
  std::sort(values.begin(), values.end());
  if (pct == 0.0) return values.front();
  const double rank = std::ceil(pct / 100.0 * static_cast<double>(values.size()));
  const std::size_t idx = static_cast<std::size_t>(rank) - 1;
  return values[std::min(idx, values.size() - 1)];
}

double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit_r2: need >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (syy == 0.0) return 1.0;  // constant y: the flat line fits exactly
  if (sxx == 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

}  // namespace roadsnap
