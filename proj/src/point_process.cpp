#include "sgz/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgz {

double distance(Point a, Point b, const Window& window) {
  const auto m = window.metric();
  const double dx = simd::wrap_delta(a.x - b.x, m);
  const double dy = simd::wrap_delta(a.y - b.y, m);
  return std::sqrt(dx * dx + dy * dy);
}

PointPattern::PointPattern(Window window) : window_(window) {}

PointPattern::PointPattern(Window window, std::vector<double> xs, std::vector<double> ys)
    : window_(window), xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) throw std::invalid_argument("coordinate columns differ in length");
}

PointPattern::PointPattern(Window window, std::span<const Point> points) : window_(window) {
  xs_.reserve(points.size());
  ys_.reserve(points.size());
  for (const auto& p : points) push_back(p);
}

std::size_t PointPattern::active_count() const {
  if (!mask_) return size();
  return static_cast<std::size_t>(std::count(mask_->begin(), mask_->end(), std::uint8_t{1}));
}

void PointPattern::set_active_mask(std::vector<std::uint8_t> mask) {
  if (mask.size() != size()) throw std::invalid_argument("mask needs one entry per point");
  mask_ = std::move(mask);
}

void PointPattern::push_back(Point p) {
  xs_.push_back(p.x);
  ys_.push_back(p.y);
  if (mask_) mask_->push_back(1);
}

PointPattern PointPattern::active_subset() const {
  if (!mask_) return PointPattern(window_, xs_, ys_);
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(size());
  ys.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if ((*mask_)[i]) {
      xs.push_back(xs_[i]);
      ys.push_back(ys_[i]);
    }
  }
  return PointPattern(window_, std::move(xs), std::move(ys));
}

PointPattern sample_ppp(double density, const Window& window, Engine& engine) {
  if (!(density >= 0.0)) throw std::invalid_argument("density must be non-negative");
  if (!(window.half_extent > 0.0)) throw std::invalid_argument("window half_extent must be positive");
  const double mean = density * window.area();
  std::int64_t count = 0;
  if (mean > 0.0) count = std::poisson_distribution<std::int64_t>(mean)(engine);

  std::uniform_real_distribution<double> coord(-window.half_extent, window.half_extent);
  std::vector<double> xs(static_cast<std::size_t>(count));
  std::vector<double> ys(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = coord(engine);
    ys[i] = coord(engine);
  }
  return PointPattern(window, std::move(xs), std::move(ys));
}

PointPattern sample_ppp(double density, const Window& window, std::uint64_t seed) {
  Engine engine(seed);
  return sample_ppp(density, window, engine);
}

namespace {

// Uniform bucket grid over the window with cells no smaller than the query
// radius, so every hole within the radius lies in the 3x3 block around the
// query cell.
class BucketGrid {
 public:
  BucketGrid(const PointPattern& pts, int cells_per_side)
      : window_(pts.window()), n_(cells_per_side) {
    cell_ = window_.side() / n_;
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_) * n_ + 1, 0);
    std::vector<std::size_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = index(cell_coord(pts.xs()[i]), cell_coord(pts.ys()[i]));
      ++counts[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    offsets_ = counts;
    xs_.resize(pts.size());
    ys_.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::size_t slot = counts[cell_of[i]]++;
      xs_[slot] = pts.xs()[i];
      ys_[slot] = pts.ys()[i];
    }
  }

  [[nodiscard]] bool any_within(Point q, double radius2) const {
    const int cx = cell_coord(q.x);
    const int cy = cell_coord(q.y);
    const auto metric = window_.metric();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        int nx = cx + dx;
        int ny = cy + dy;
        if (window_.wrap) {
          nx = (nx + n_) % n_;
          ny = (ny + n_) % n_;
        } else if (nx < 0 || ny < 0 || nx >= n_ || ny >= n_) {
          continue;
        }
        const std::size_t c = index(nx, ny);
        const std::size_t lo = offsets_[c];
        const std::size_t len = offsets_[c + 1] - lo;
        if (len == 0) continue;
        if (simd::any_within(std::span(xs_).subspan(lo, len), std::span(ys_).subspan(lo, len),
                             q.x, q.y, radius2, metric)) {
          return true;
        }
      }
    }
    return false;
  }

 private:
  [[nodiscard]] int cell_coord(double v) const {
    const int c = static_cast<int>(std::floor((v + window_.half_extent) / cell_));
    return std::clamp(c, 0, n_ - 1);
  }
  [[nodiscard]] std::size_t index(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(cx);
  }

  Window window_;
  int n_;
  double cell_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

constexpr int kMaxCellsPerSide = 128;

}  // namespace

PointPattern carve_php(const PointPattern& baseline, const PointPattern& holes, double r_g) {
  if (!(baseline.window() == holes.window())) {
    throw std::invalid_argument("baseline and hole patterns must share one window");
  }
  if (!(r_g >= 0.0)) throw std::invalid_argument("guard radius must be non-negative");

  PointPattern out = baseline;
  std::vector<std::uint8_t> mask(baseline.size(), 1);
  if (r_g == 0.0 || holes.empty() || baseline.empty()) {
    out.set_active_mask(std::move(mask));
    return out;
  }

  const double r2 = r_g * r_g;
  const Window& w = baseline.window();
  // Shrink slightly so rounding can never make a cell narrower than r_g.
  const double fit = std::floor(w.side() / r_g * (1.0 - 1e-12));
  const int cells = static_cast<int>(std::min<double>(fit, kMaxCellsPerSide));

  if (cells < 3) {
    for (std::size_t i = 0; i < baseline.size(); ++i) {
      if (simd::any_within(holes.xs(), holes.ys(), baseline.xs()[i], baseline.ys()[i], r2,
                           w.metric())) {
        mask[i] = 0;
      }
    }
  } else {
    const BucketGrid grid(holes, cells);
    for (std::size_t i = 0; i < baseline.size(); ++i) {
      if (grid.any_within(baseline.point(i), r2)) mask[i] = 0;
    }
  }
  out.set_active_mask(std::move(mask));
  return out;
}

std::optional<double> nearest_distance(Point origin, const PointPattern& pattern,
                                       bool active_only) {
  double best2 = 0.0;
  if (active_only && pattern.has_mask()) {
    const auto subset = pattern.active_subset();
    if (subset.empty()) return std::nullopt;
    best2 = simd::min_dist2(subset.xs(), subset.ys(), origin.x, origin.y,
                            pattern.window().metric());
  } else {
    if (pattern.empty()) return std::nullopt;
    best2 = simd::min_dist2(pattern.xs(), pattern.ys(), origin.x, origin.y,
                            pattern.window().metric());
  }
  return std::sqrt(best2);
}

double contact_distance_pdf(double r_p, double lambda_tilde, double r_g) {
  if (r_p < r_g) return 0.0;
  const double u = r_p - r_g;
  return 2.0 * std::numbers::pi * lambda_tilde * r_p *
         std::exp(-std::numbers::pi * lambda_tilde * u * u);
}

double contact_distance_mass(double lambda_tilde, double r_g) {
  if (lambda_tilde <= 0.0) return 0.0;
  return 1.0 + std::numbers::pi * r_g * std::sqrt(lambda_tilde);
}

double conditioned_contact_distance_pdf(double r_p, double lambda_tilde, double r_g) {
  if (r_p < r_g) return 0.0;
  return 2.0 * std::numbers::pi * lambda_tilde * r_p *
         std::exp(-std::numbers::pi * lambda_tilde * (r_p * r_p - r_g * r_g));
}

}  // namespace sgz
