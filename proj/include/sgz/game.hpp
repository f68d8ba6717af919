#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sgz/params.hpp"
#include "sgz/quadrature.hpp"

namespace sgz {

/// Discretized strategy sets. Both lists are strictly increasing and
/// nonempty; densities lie in (0, lambda_s_max].
struct StrategyGrid {
  std::vector<double> rg_values;
  std::vector<double> lambda_values;

  /// rg_points values on [0, rg_max] including both ends, and
  /// lambda_max * k / lambda_points for k = 1..lambda_points.
  static StrategyGrid uniform(double rg_max, std::size_t rg_points, double lambda_max,
                              std::size_t lambda_points);
  /// 64 x 64 on [0, 2] and (0, lambda_s_max].
  static StrategyGrid standard(const SystemParams& params);

  /// Throws std::invalid_argument naming the first broken invariant.
  void check(const SystemParams& params) const;
};

/// p_con, zeroed when p_sec falls below epsilon.
double utility_primary(double r_g, double lambda_s, const SystemParams& params,
                       const QuadratureSpec& quad);
/// p_energy.
double utility_secondary(double r_g, double lambda_s, const SystemParams& params,
                         const QuadratureSpec& quad);

struct GuardResponse {
  double r_g = 0.0;
  std::size_t index = 0;
  /// No grid radius met the secrecy target; r_g maximizes p_sec instead.
  bool infeasible = false;
  /// r_g is the largest grid radius, so the unbounded optimum may lie beyond.
  bool on_boundary = false;
};

struct DensityResponse {
  double lambda_s = 0.0;
  std::size_t index = 0;
};

/// Grid evaluations may run on `threads` workers; ties go to the smallest
/// strategy either way.
GuardResponse best_response_rg(double lambda_s, const SystemParams& params,
                               const StrategyGrid& grid, const QuadratureSpec& quad,
                               unsigned threads = 1);
DensityResponse best_response_lambda(double r_g, const SystemParams& params,
                                     const StrategyGrid& grid, const QuadratureSpec& quad,
                                     unsigned threads = 1);

enum class UpdateRule {
  simultaneous,  ///< both players respond to the previous iterate
  sequential,    ///< the density responds to the guard radius just chosen
};

struct GameStep {
  std::size_t iteration = 0;
  double r_g = 0.0;
  double lambda_s = 0.0;
  double u_primary = 0.0;
  double u_secondary = 0.0;
  bool rg_infeasible = false;
  bool rg_on_boundary = false;
};

struct GameTrace {
  /// Entry 0 is the starting profile (r_g = 0, lambda_s = lambda_s_max).
  std::vector<GameStep> iterations;
  bool converged = false;
  /// The last profile repeats the one two steps back.
  bool two_cycle = false;
  /// Present iff converged, as (r_g, lambda_s).
  std::optional<std::pair<double, double>> ne_point;

  /// Update steps taken, excluding the starting profile.
  [[nodiscard]] std::size_t steps() const { return iterations.empty() ? 0 : iterations.size() - 1; }
};

struct NashOptions {
  std::size_t max_iter = 100;
  UpdateRule rule = UpdateRule::simultaneous;
  unsigned threads = 1;
};

/// Best-response iteration until a profile repeats. Throws
/// std::invalid_argument when max_iter is 0 or the grid is malformed.
GameTrace solve_nash(const SystemParams& params, const StrategyGrid& grid,
                     const QuadratureSpec& quad, const NashOptions& options = {});

}  // namespace sgz
