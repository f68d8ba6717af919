#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sgz/rng.hpp"
#include "sgz/simd/kernels.hpp"

namespace sgz {

/// Square observation window [-half_extent, half_extent)^2, optionally with
/// the toroidal (wrap-around) metric.
struct Window {
  double half_extent = 10.0;
  bool wrap = true;

  [[nodiscard]] double side() const { return 2.0 * half_extent; }
  [[nodiscard]] double area() const { return side() * side(); }
  [[nodiscard]] simd::Metric metric() const { return {side(), wrap}; }

  bool operator==(const Window&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

/// Window-metric distance between two points.
double distance(Point a, Point b, const Window& window);

/// Finite point configuration in a window, stored column-wise so the SIMD
/// kernels can stream coordinates. The optional activity mask marks which
/// points survive hole carving; masked points are kept so retention stays
/// observable.
class PointPattern {
 public:
  PointPattern() = default;
  explicit PointPattern(Window window);
  PointPattern(Window window, std::vector<double> xs, std::vector<double> ys);
  PointPattern(Window window, std::span<const Point> points);

  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] std::size_t size() const { return xs_.size(); }
  [[nodiscard]] bool empty() const { return xs_.empty(); }
  [[nodiscard]] Point point(std::size_t i) const { return {xs_[i], ys_[i]}; }
  [[nodiscard]] std::span<const double> xs() const { return xs_; }
  [[nodiscard]] std::span<const double> ys() const { return ys_; }

  [[nodiscard]] bool has_mask() const { return mask_.has_value(); }
  /// Unmasked patterns treat every point as active.
  [[nodiscard]] bool active(std::size_t i) const { return !mask_ || (*mask_)[i] != 0; }
  [[nodiscard]] std::size_t active_count() const;
  [[nodiscard]] const std::optional<std::vector<std::uint8_t>>& active_mask() const {
    return mask_;
  }
  /// Throws std::invalid_argument unless mask.size() == size().
  void set_active_mask(std::vector<std::uint8_t> mask);

  void push_back(Point p);
  /// Copy holding only the active points, without a mask.
  [[nodiscard]] PointPattern active_subset() const;

  bool operator==(const PointPattern&) const = default;

 private:
  Window window_{};
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::optional<std::vector<std::uint8_t>> mask_;
};

/// Homogeneous PPP on the window. Draw order: the Poisson count, then x and y
/// of each point in turn.
PointPattern sample_ppp(double density, const Window& window, Engine& engine);
PointPattern sample_ppp(double density, const Window& window, std::uint64_t seed);

/// Masks every baseline point that has a hole point strictly within r_g
/// (Poisson hole process). Throws std::invalid_argument on mismatched windows
/// or negative r_g.
PointPattern carve_php(const PointPattern& baseline, const PointPattern& holes, double r_g);

/// Distance from origin to the closest (optionally active-only) point.
std::optional<double> nearest_distance(Point origin, const PointPattern& pattern,
                                       bool active_only);

/// Contact-distance density of the hole process seen from a hole centre in
/// its printed form 2*pi*lt*r*exp(-pi*lt*(r - r_g)^2), zero below r_g. This
/// form carries excess mass 1 + pi*r_g*sqrt(lt) for r_g > 0; see
/// contact_distance_mass.
double contact_distance_pdf(double r_p, double lambda_tilde, double r_g);

/// Total mass of contact_distance_pdf over [r_g, inf), in closed form.
double contact_distance_mass(double lambda_tilde, double r_g);

/// Nearest-point density of a PPP of density lambda_tilde conditioned on no
/// point within r_g: 2*pi*lt*r*exp(-pi*lt*(r^2 - r_g^2)). This is the kernel
/// the energy-coverage integral uses; it integrates to one.
double conditioned_contact_distance_pdf(double r_p, double lambda_tilde, double r_g);

}  // namespace sgz
