#include "sgz/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sgz/parallel.hpp"
#include "sgz/simd/kernels.hpp"

namespace sgz {
namespace {

constexpr double kTruncationTolerance = 1e-4;
constexpr std::size_t kChunk = 256;

std::uint64_t experiment_id(Condition c) { return static_cast<std::uint64_t>(c) + 1; }

bool any_er_within(const PointPattern& ers, Point centre, double r_g) {
  if (r_g <= 0.0 || ers.empty()) return false;
  return simd::any_within(ers.xs(), ers.ys(), centre.x, centre.y, r_g * r_g,
                          ers.window().metric());
}

double wrapped_d2(Point a, Point b, simd::Metric m) {
  const double dx = simd::wrap_delta(a.x - b.x, m);
  const double dy = simd::wrap_delta(a.y - b.y, m);
  return dx * dx + dy * dy;
}

// Stops before the PT draws when the typical PT is already known inactive;
// the ER draws come first, so the stream positions of everything that is
// drawn are unaffected.
SceneRealization draw_scene(const SystemParams& p, std::uint64_t seed, Condition condition,
                            const Window& window, std::uint64_t index, bool stop_if_inactive,
                            bool* stopped) {
  const std::uint64_t experiment = experiment_id(condition);
  Engine geometry = make_stream(seed, experiment, index, StreamPurpose::geometry);
  SceneRealization scene{PointPattern(window), PointPattern(window), Point{0.0, 0.0}, condition,
                         make_stream(seed, experiment, index, StreamPurpose::fading)};

  PointPattern ers = sample_ppp(p.lambda_s, window, geometry);
  if (condition == Condition::typical_pt_active && p.r_g > 0.0) {
    const double r2 = p.r_g * p.r_g;
    PointPattern kept(window);
    for (std::size_t i = 0; i < ers.size(); ++i) {
      if (wrapped_d2(ers.point(i), scene.typical_anchor, window.metric()) >= r2) {
        kept.push_back(ers.point(i));
      }
    }
    ers = std::move(kept);
  } else if (condition == Condition::typical_er) {
    PointPattern with_typical(window);
    with_typical.push_back(scene.typical_anchor);
    for (std::size_t i = 0; i < ers.size(); ++i) with_typical.push_back(ers.point(i));
    ers = std::move(with_typical);
  }
  scene.ers = std::move(ers);

  if (stop_if_inactive && condition == Condition::none &&
      any_er_within(scene.ers, scene.typical_anchor, p.r_g)) {
    *stopped = true;
    return scene;
  }
  scene.pts = carve_php(sample_ppp(p.lambda_p, window, geometry), scene.ers, p.r_g);
  return scene;
}

struct Scratch {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> gains;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void gather_active(const PointPattern& pts, Scratch& s) {
  s.xs.clear();
  s.ys.clear();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts.active(i)) {
      s.xs.push_back(pts.xs()[i]);
      s.ys.push_back(pts.ys()[i]);
    }
  }
}

// Gains drawn in call order from the scene's fading stream.
struct StreamGains {
  Engine& engine;
  double operator()(Point, Point) { return draw_exp1(engine); }
};

struct GeometricGains {
  const GainFn& fn;
  double operator()(Point tx, Point rx) const { return fn(tx, rx); }
};

double path_gain(double d2, double alpha) { return std::pow(d2, -0.5 * alpha); }

template <class Gains>
bool evaluate_connection(const SceneRealization& scene, const SystemParams& p, Gains&& gain) {
  const Point tx = scene.typical_anchor;
  if (scene.condition == Condition::none && any_er_within(scene.ers, tx, p.r_g)) return false;
  const Point rx{tx.x + p.r_1, tx.y};
  const double signal = p.p_t * gain(tx, rx) * std::pow(p.r_1, -p.alpha);
  if (signal < p.beta_p * p.sigma2_p) return false;

  Scratch& s = scratch();
  gather_active(scene.pts, s);
  s.gains.resize(s.xs.size());
  for (std::size_t i = 0; i < s.xs.size(); ++i) s.gains[i] = gain(Point{s.xs[i], s.ys[i]}, rx);
  const double interference =
      p.p_t * simd::pathloss_sum(s.xs, s.ys, s.gains, rx.x, rx.y, scene.pts.window().metric(),
                                 p.alpha);
  return signal >= p.beta_p * (p.sigma2_p + interference);
}

template <class Gains>
bool evaluate_secrecy(const SceneRealization& scene, const SystemParams& p, Gains&& gain) {
  const Point tx = scene.typical_anchor;
  const auto metric = scene.ers.window().metric();
  Scratch& s = scratch();
  bool gathered = false;
  for (std::size_t j = 0; j < scene.ers.size(); ++j) {
    const Point er = scene.ers.point(j);
    const double signal = p.p_t * gain(tx, er) * path_gain(wrapped_d2(tx, er, metric), p.alpha);
    if (signal < p.beta_s * p.sigma2_s) continue;
    if (!gathered) {
      gather_active(scene.pts, s);
      s.gains.resize(s.xs.size());
      gathered = true;
    }
    for (std::size_t i = 0; i < s.xs.size(); ++i) s.gains[i] = gain(Point{s.xs[i], s.ys[i]}, er);
    const double interference =
        p.p_t * simd::pathloss_sum(s.xs, s.ys, s.gains, er.x, er.y, metric, p.alpha);
    if (signal >= p.beta_s * (p.sigma2_s + interference)) return false;
  }
  return true;
}

template <class Gains>
HarvestOutcome evaluate_harvest(const SceneRealization& scene, const SystemParams& p,
                                Gains&& gain, bool locate_nearest) {
  const Point rx = scene.typical_anchor;
  const auto metric = scene.pts.window().metric();
  Scratch& s = scratch();
  gather_active(scene.pts, s);
  if (s.xs.empty()) return HarvestOutcome::no_active_pt;
  const double d2 = simd::min_dist2(s.xs, s.ys, rx.x, rx.y, metric);
  Point nearest = rx;
  if (locate_nearest) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (wrapped_d2(Point{s.xs[i], s.ys[i]}, rx, metric) == d2) {
        nearest = Point{s.xs[i], s.ys[i]};
        break;
      }
    }
  }
  const double energy = p.eta * p.slot_t * p.p_t * path_gain(d2, p.alpha) * gain(nearest, rx);
  return energy >= p.e_min ? HarvestOutcome::success : HarvestOutcome::failure;
}

void require_samples(const McOptions& o) {
  if (o.n == 0) throw std::invalid_argument("Monte Carlo sample count must be at least 1");
}

Window chosen_window(const SystemParams& p, const McOptions& o) {
  const Window w = o.window.value_or(default_window(p));
  check_window(p, w);
  return w;
}

struct Counts {
  std::size_t successes = 0;
  std::size_t degenerate = 0;
};

// Integer reductions keep the totals independent of scheduling.
template <class PerRealization>
Counts run_realizations(const McOptions& o, PerRealization&& one) {
  std::atomic<std::size_t> successes{0};
  std::atomic<std::size_t> degenerate{0};
  parallel_for(o.n, kChunk, o.threads, [&](std::size_t begin, std::size_t end) {
    Counts local;
    for (std::size_t i = begin; i < end; ++i) one(static_cast<std::uint64_t>(i), local);
    successes += local.successes;
    degenerate += local.degenerate;
  });
  return {successes.load(), degenerate.load()};
}

Estimate make_estimate(const Counts& c, std::size_t n, double scale) {
  Estimate e;
  e.n = n;
  e.value = scale * static_cast<double>(c.successes) / static_cast<double>(n);
  e.half_width_95 = scale * binomial_half_width(c.successes, n);
  e.degenerate = c.degenerate;
  return e;
}

}  // namespace

double interference_truncation_radius(const SystemParams& p) {
  const double excess = p.alpha - 2.0;
  const double mean = 2.0 * std::numbers::pi * p.lambda_p * p.beta_p * std::pow(p.r_1, p.alpha) /
                      (excess * kTruncationTolerance);
  return std::pow(mean, 1.0 / excess);
}

Window default_window(const SystemParams& p) {
  const double half =
      std::max({10.0, p.r_1 + 10.0 * p.r_g, interference_truncation_radius(p)});
  return Window{half, true};
}

void check_window(const SystemParams& p, const Window& w) {
  const double needed_local = 5.0 * std::max(p.r_g, p.r_1);
  const double needed_tail = interference_truncation_radius(p);
  if (!(w.half_extent >= needed_local) || !(w.half_extent >= needed_tail)) {
    throw WindowError("window half extent " + std::to_string(w.half_extent) +
                      " is below the required " +
                      std::to_string(std::max(needed_local, needed_tail)));
  }
}

SceneRealization realize_scene(const SystemParams& p, std::uint64_t seed, Condition condition,
                               const Window& window, std::uint64_t index) {
  bool stopped = false;
  return draw_scene(p, seed, condition, window, index, false, &stopped);
}

SceneRealization realize_scene(const SystemParams& p, std::uint64_t seed, Condition condition) {
  return realize_scene(p, seed, condition, default_window(p), 0);
}

bool connection_indicator(SceneRealization& scene, const SystemParams& p) {
  return evaluate_connection(scene, p, StreamGains{scene.fading});
}
bool connection_indicator(const SceneRealization& scene, const SystemParams& p,
                          const GainFn& gain) {
  return evaluate_connection(scene, p, GeometricGains{gain});
}

bool secrecy_indicator(SceneRealization& scene, const SystemParams& p) {
  return evaluate_secrecy(scene, p, StreamGains{scene.fading});
}
bool secrecy_indicator(const SceneRealization& scene, const SystemParams& p, const GainFn& gain) {
  return evaluate_secrecy(scene, p, GeometricGains{gain});
}

HarvestOutcome harvest_indicator(SceneRealization& scene, const SystemParams& p) {
  return evaluate_harvest(scene, p, StreamGains{scene.fading}, false);
}
HarvestOutcome harvest_indicator(const SceneRealization& scene, const SystemParams& p,
                                 const GainFn& gain) {
  return evaluate_harvest(scene, p, GeometricGains{gain}, true);
}

double binomial_half_width(std::size_t successes, std::size_t n) {
  constexpr double z = 1.959963984540054;
  const double nd = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nd;
  if (std::min(successes, n - successes) >= 30) {
    return z * std::sqrt(phat * (1.0 - phat) / nd);
  }
  const double z2 = z * z;
  return z / (1.0 + z2 / nd) * std::sqrt(phat * (1.0 - phat) / nd + z2 / (4.0 * nd * nd));
}

Estimate estimate_p_con(const SystemParams& p, const McOptions& o) {
  require_samples(o);
  const Window w = chosen_window(p, o);
  const Counts c = run_realizations(o, [&](std::uint64_t i, Counts& acc) {
    bool stopped = false;
    SceneRealization scene = draw_scene(p, o.seed, Condition::none, w, i, true, &stopped);
    if (!stopped && connection_indicator(scene, p)) ++acc.successes;
  });
  return make_estimate(c, o.n, 1.0);
}

Estimate estimate_p_sec(const SystemParams& p, const McOptions& o) {
  require_samples(o);
  const Window w = chosen_window(p, o);
  const Counts c = run_realizations(o, [&](std::uint64_t i, Counts& acc) {
    SceneRealization scene = realize_scene(p, o.seed, Condition::typical_pt_active, w, i);
    if (secrecy_indicator(scene, p)) ++acc.successes;
  });
  return make_estimate(c, o.n, 1.0);
}

Estimate estimate_p_energy(const SystemParams& p, const McOptions& o) {
  require_samples(o);
  const Window w = chosen_window(p, o);
  if (p.lambda_s == 0.0) return make_estimate(Counts{}, o.n, 0.0);
  const Counts c = run_realizations(o, [&](std::uint64_t i, Counts& acc) {
    SceneRealization scene = realize_scene(p, o.seed, Condition::typical_er, w, i);
    switch (harvest_indicator(scene, p)) {
      case HarvestOutcome::success: ++acc.successes; break;
      case HarvestOutcome::failure: break;
      case HarvestOutcome::no_active_pt: ++acc.degenerate; break;
    }
  });
  return make_estimate(c, o.n, p.lambda_s);
}

}  // namespace sgz
