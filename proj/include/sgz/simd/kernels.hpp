#pragma once

// Data-parallel inner loops of the spatial simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The dispatching entry points pick the widest variant the running
// CPU supports; SGZ_SIMD=scalar in the environment (or set_level) forces the
// reference path. Variants agree to a few ulps; the equivalence tests pin the
// tolerance.

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

namespace sgz::simd {

enum class Level { scalar, avx2 };

/// Coordinate metric of a square window. With wrap set, coordinate
/// differences are reduced modulo `period` (= window side) to the nearest
/// image, giving the toroidal distance.
struct Metric {
  double period = 0.0;
  bool wrap = false;
};

bool supported(Level level);
Level active_level();
/// Throws std::invalid_argument when the CPU lacks `level`.
void set_level(Level level);
std::string_view level_name(Level level);

/// Sum over i of gains[i] * |p_i - r|^(-alpha).
double pathloss_sum(std::span<const double> xs, std::span<const double> ys,
                    std::span<const double> gains, double rx, double ry, Metric metric,
                    double alpha);

/// Minimum squared distance from r to the points; +inf when empty.
double min_dist2(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                 Metric metric);

/// True when some point lies strictly closer than sqrt(radius2) to r.
bool any_within(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                double radius2, Metric metric);

namespace scalar {
double pathloss_sum(std::span<const double> xs, std::span<const double> ys,
                    std::span<const double> gains, double rx, double ry, Metric metric,
                    double alpha);
double min_dist2(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                 Metric metric);
bool any_within(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                double radius2, Metric metric);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SGZ_HAVE_AVX2_KERNELS 1
namespace avx2 {
double pathloss_sum(std::span<const double> xs, std::span<const double> ys,
                    std::span<const double> gains, double rx, double ry, Metric metric,
                    double alpha);
double min_dist2(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                 Metric metric);
bool any_within(std::span<const double> xs, std::span<const double> ys, double rx, double ry,
                double radius2, Metric metric);
}  // namespace avx2
#else
#define SGZ_HAVE_AVX2_KERNELS 0
#endif

/// Nearest-image coordinate difference; shared by every variant.
inline double wrap_delta(double d, Metric metric) {
  return metric.wrap ? d - metric.period * std::nearbyint(d / metric.period) : d;
}

}  // namespace sgz::simd
