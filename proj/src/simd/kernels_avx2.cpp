// AVX2 variants. Compiled without a global -mavx2 so that no inline function
// from a shared header is emitted with AVX2 encodings; only the functions
// below carry the target attribute and they are reached through the
// dispatcher after a CPUID check.

#include "sgz/simd/kernels.hpp"

#if SGZ_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#define SGZ_AVX2 __attribute__((target("avx2")))

namespace sgz::simd::avx2 {
namespace {

// Path-loss exponents that are small integers are evaluated by repeated
// multiplication of 1/d^2 (and one 1/d for odd exponents); anything else falls
// back to per-lane std::pow.
struct PathLossPlan {
  bool integral = false;
  int half_power = 0;  // floor(alpha / 2)
  bool odd = false;
};

PathLossPlan plan_for(double alpha) {
  PathLossPlan plan;
  if (alpha == std::floor(alpha) && alpha >= 1.0 && alpha <= 64.0) {
    const int k = static_cast<int>(alpha);
    plan.integral = true;
    plan.half_power = k / 2;
    plan.odd = (k % 2) != 0;
  }
  return plan;
}

double pathloss_one(double d2, const PathLossPlan& plan, double alpha) {
  if (!plan.integral) return std::pow(d2, -0.5 * alpha);
  const double inv = 1.0 / d2;
  double acc = 1.0;
  for (int i = 0; i < plan.half_power; ++i) acc *= inv;
  if (plan.odd) acc /= std::sqrt(d2);
  return acc;
}

// Same operation sequence as wrap_delta so both paths pick the same image.
SGZ_AVX2 inline __m256d wrap4(__m256d d, __m256d period) {
  const __m256d k =
      _mm256_round_pd(_mm256_div_pd(d, period), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  return _mm256_sub_pd(d, _mm256_mul_pd(period, k));
}

SGZ_AVX2 inline __m256d dist2_4(const double* xs, const double* ys, __m256d rx, __m256d ry,
                                bool wrap, __m256d period) {
  __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs), rx);
  __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys), ry);
  if (wrap) {
    dx = wrap4(dx, period);
    dy = wrap4(dy, period);
  }
  return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

inline double dist2_one(double x, double y, double rx, double ry, Metric metric) {
  const double dx = wrap_delta(x - rx, metric);
  const double dy = wrap_delta(y - ry, metric);
  return dx * dx + dy * dy;
}

}  // namespace

SGZ_AVX2 double pathloss_sum(std::span<const double> xs, std::span<const double> ys,
                             std::span<const double> gains, double rx, double ry,
                             Metric metric, double alpha) {
  assert(xs.size() == ys.size() && xs.size() == gains.size());
  const std::size_t n = xs.size();
  const PathLossPlan plan = plan_for(alpha);
  const __m256d vrx = _mm256_set1_pd(rx);
  const __m256d vry = _mm256_set1_pd(ry);
  const __m256d period = _mm256_set1_pd(metric.period);
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d2 = dist2_4(xs.data() + i, ys.data() + i, vrx, vry, metric.wrap, period);
    __m256d pl;
    if (plan.integral) {
      const __m256d inv = _mm256_div_pd(one, d2);
      pl = one;
      for (int k = 0; k < plan.half_power; ++k) pl = _mm256_mul_pd(pl, inv);
      if (plan.odd) pl = _mm256_div_pd(pl, _mm256_sqrt_pd(d2));
    } else {
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, d2);
      for (double& v : lanes) v = std::pow(v, -0.5 * alpha);
      pl = _mm256_load_pd(lanes);
    }
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(gains.data() + i), pl));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    sum += gains[i] * pathloss_one(dist2_one(xs[i], ys[i], rx, ry, metric), plan, alpha);
  }
  return sum;
}

SGZ_AVX2 double min_dist2(std::span<const double> xs, std::span<const double> ys, double rx,
                          double ry, Metric metric) {
  assert(xs.size() == ys.size());
  const std::size_t n = xs.size();
  const __m256d vrx = _mm256_set1_pd(rx);
  const __m256d vry = _mm256_set1_pd(ry);
  const __m256d period = _mm256_set1_pd(metric.period);

  constexpr double inf = std::numeric_limits<double>::infinity();
  __m256d best4 = _mm256_set1_pd(inf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    best4 = _mm256_min_pd(best4, dist2_4(xs.data() + i, ys.data() + i, vrx, vry, metric.wrap,
                                         period));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best4);
  double best = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  for (; i < n; ++i) best = std::min(best, dist2_one(xs[i], ys[i], rx, ry, metric));
  return best;
}

SGZ_AVX2 bool any_within(std::span<const double> xs, std::span<const double> ys, double rx,
                         double ry, double radius2, Metric metric) {
  assert(xs.size() == ys.size());
  const std::size_t n = xs.size();
  const __m256d vrx = _mm256_set1_pd(rx);
  const __m256d vry = _mm256_set1_pd(ry);
  const __m256d period = _mm256_set1_pd(metric.period);
  const __m256d r2 = _mm256_set1_pd(radius2);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d2 = dist2_4(xs.data() + i, ys.data() + i, vrx, vry, metric.wrap, period);
    if (_mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LT_OQ)) != 0) return true;
  }
  for (; i < n; ++i) {
    if (dist2_one(xs[i], ys[i], rx, ry, metric) < radius2) return true;
  }
  return false;
}

}  // namespace sgz::simd::avx2

#endif
