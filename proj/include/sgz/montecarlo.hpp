#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "sgz/params.hpp"
#include "sgz/point_process.hpp"
#include "sgz/rng.hpp"

namespace sgz {

/// What the window centre holds in a scene.
enum class Condition {
  none,               ///< typical PT at the centre, its PR at (r_1, 0)
  typical_pt_active,  ///< as `none`, with no ER within r_g of the centre
  typical_er,         ///< an ER at the centre, stored as ers[0]
};

/// One spatial draw. `pts` are the non-typical PTs with their activity mask
/// from carving against `ers`; `fading` is the stream every fading gain of
/// the scene is drawn from, lazily and in evaluation order.
struct SceneRealization {
  PointPattern pts;
  PointPattern ers;
  Point typical_anchor;
  Condition condition = Condition::none;
  Engine fading;
};

class WindowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Radius beyond which the mean aggregate interference at the primary
/// receiver, relative to its threshold, falls below 1e-4.
double interference_truncation_radius(const SystemParams& params);

/// Toroidal window with half extent max(10, r_1 + 10 r_g, truncation radius).
Window default_window(const SystemParams& params);

/// Throws WindowError unless half_extent >= 5 max(r_g, r_1) and half_extent
/// covers the truncation radius.
void check_window(const SystemParams& params, const Window& window);

/// Deterministic in (params, seed, condition, window, index). Geometry draw
/// order: ER count and coordinates, then PT count and coordinates.
SceneRealization realize_scene(const SystemParams& params, std::uint64_t seed, Condition condition,
                               const Window& window, std::uint64_t index = 0);
SceneRealization realize_scene(const SystemParams& params, std::uint64_t seed, Condition condition);

/// Fading power gain of the link from tx to rx. Used to evaluate an
/// indicator with gains tied to geometry rather than to draw order.
using GainFn = std::function<double(Point tx, Point rx)>;

/// Typical PT active and SINR at its PR >= beta_p. Draws the direct gain,
/// then one gain per active interferer in pattern order.
bool connection_indicator(SceneRealization& scene, const SystemParams& params);
bool connection_indicator(const SceneRealization& scene, const SystemParams& params,
                          const GainFn& gain);

/// Every ER has SINR < beta_s. ERs are visited in order; each draws its
/// direct gain and, unless noise alone already defeats it, one gain per
/// active PT. Evaluation stops at the first ER that decodes.
bool secrecy_indicator(SceneRealization& scene, const SystemParams& params);
bool secrecy_indicator(const SceneRealization& scene, const SystemParams& params,
                       const GainFn& gain);

enum class HarvestOutcome { success, failure, no_active_pt };

/// Energy from the nearest active PT at the typical ER against e_min.
HarvestOutcome harvest_indicator(SceneRealization& scene, const SystemParams& params);
HarvestOutcome harvest_indicator(const SceneRealization& scene, const SystemParams& params,
                                 const GainFn& gain);

struct Estimate {
  double value = 0.0;
  double half_width_95 = 0.0;
  std::size_t n = 0;
  /// Realizations without any active PT (energy estimator only).
  std::size_t degenerate = 0;

  /// More than 1% of realizations were degenerate.
  [[nodiscard]] bool degenerate_flagged() const { return degenerate * 100 > n; }
};

/// 95% half-width for `successes` out of n: normal approximation, Wilson
/// score half-width when fewer than 30 successes or failures.
double binomial_half_width(std::size_t successes, std::size_t n);

struct McOptions {
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Replaces the default window; still subject to check_window.
  std::optional<Window> window;
};

/// Each estimator throws std::invalid_argument when n = 0 and WindowError
/// when the window is too small. Results do not depend on options.threads.
Estimate estimate_p_con(const SystemParams& params, const McOptions& options);
Estimate estimate_p_sec(const SystemParams& params, const McOptions& options);
/// value = lambda_s times the success frequency (a density).
Estimate estimate_p_energy(const SystemParams& params, const McOptions& options);

}  // namespace sgz
