#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "sgz/simd/kernels.hpp"

namespace sgz::simd::scalar {

double pathloss_sum(std::span<const double> xs, std::span<const double> ys,
                    std::span<const double> gains, double rx, double ry, Metric metric,
                    double alpha) {
  assert(xs.size() == ys.size() && xs.size() == gains.size());
  const double half = -0.5 * alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = wrap_delta(xs[i] - rx, metric);
    const double dy = wrap_delta(ys[i] - ry, metric);
    sum += gains[i] * std::pow(dx * dx + dy * dy, half);
  }
  return sum;
}

double min_dist2(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                 Metric metric) {
  assert(xs.size() == ys.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = wrap_delta(xs[i] - rx, metric);
    const double dy = wrap_delta(ys[i] - ry, metric);
    best = std::min(best, dx * dx + dy * dy);
  }
  return best;
}

bool any_within(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                double radius2, Metric metric) {
  assert(xs.size() == ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = wrap_delta(xs[i] - rx, metric);
    const double dy = wrap_delta(ys[i] - ry, metric);
    if (dx * dx + dy * dy < radius2) return true;
  }
  return false;
}

}  // namespace sgz::simd::scalar
