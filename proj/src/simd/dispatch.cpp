#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sgz/simd/kernels.hpp"

namespace sgz::simd {
namespace {

Level detect() {
  if (const char* env = std::getenv("SGZ_SIMD")) {
    if (std::string(env) == "scalar") return Level::scalar;
  }
  return supported(Level::avx2) ? Level::avx2 : Level::scalar;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{detect()};
  return level;
}

}  // namespace

bool supported(Level level) {
  switch (level) {
    case Level::scalar:
      return true;
    case Level::avx2:
#if SGZ_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (!supported(level)) {
    throw std::invalid_argument("SIMD level " + std::string(level_name(level)) +
                                " is not supported on this CPU");
  }
  current().store(level, std::memory_order_relaxed);
}

std::string_view level_name(Level level) {
  return level == Level::avx2 ? "avx2" : "scalar";
}

double pathloss_sum(std::span<const double> xs, std::span<const double> ys,
                    std::span<const double> gains, double rx, double ry, Metric metric,
                    double alpha) {
#if SGZ_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::pathloss_sum(xs, ys, gains, rx, ry, metric, alpha);
#endif
  return scalar::pathloss_sum(xs, ys, gains, rx, ry, metric, alpha);
}

double min_dist2(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                 Metric metric) {
#if SGZ_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::min_dist2(xs, ys, rx, ry, metric);
#endif
  return scalar::min_dist2(xs, ys, rx, ry, metric);
}

bool any_within(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                double radius2, Metric metric) {
#if SGZ_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::any_within(xs, ys, rx, ry, radius2, metric);
#endif
  return scalar::any_within(xs, ys, rx, ry, radius2, metric);
}

}  // namespace sgz::simd
