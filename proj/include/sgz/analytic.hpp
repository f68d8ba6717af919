#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgz/params.hpp"
#include "sgz/quadrature.hpp"

namespace sgz {

/// A probability of the form exp(-sum of terms), kept with its named
/// exponent contributions. `divergent` marks an exponent that is infinite
/// (value reported as exactly 0) instead of raising.
struct MetricBreakdown {
  double value = 1.0;
  std::vector<std::pair<std::string, double>> terms;
  bool divergent = false;

  [[nodiscard]] double exponent() const;
  /// Throws std::out_of_range for an unknown term name.
  [[nodiscard]] double term(std::string_view name) const;
};

/// Probability that a transmitter's guard zone holds no energy receiver.
double p_active(double lambda_s, double r_g);

/// Successful-connection probability with terms "activity", "noise",
/// "interference".
MetricBreakdown p_con(const SystemParams& params);

/// Interference weight of the connection probability with full activity:
/// 2 pi^2 lambda_p beta_p^(2/alpha) r_1^2 / (alpha sin(2 pi / alpha)).
double threshold_a1(const SystemParams& params);

/// Guard radius maximizing p_con without the secrecy constraint. Throws
/// std::domain_error when lambda_s = 0 and a1 > 1 (radius unbounded).
double unconstrained_optimal_rg(const SystemParams& params);

/// p_con at the unconstrained optimum, an upper bound on any constrained one.
double p_con_upper_bound(const SystemParams& params);

// Laplace transform of the Rayleigh-faded interference from a PPP of density
// lambda_eff with no interferer closer than `exclusion`:
//   L(s) = exp(-2 pi lambda_eff int_exclusion^inf s r^-alpha / (1 + s r^-alpha) r dr).

/// Closed form for exclusion = 0: exp(-2 pi^2 lambda_eff s^(2/alpha) csc(2 pi/alpha) / alpha).
double laplace_interference_closed_form(double s, double lambda_eff, double alpha);

/// Closed form when exclusion = 0, otherwise the finite z-integral
/// int_0^{s exclusion^-alpha} s^(2/alpha) / (alpha (1 + z) z^(2/alpha)) dz.
double laplace_interference(double s, double lambda_eff, double exclusion, double alpha,
                            const QuadratureSpec& quad);

/// Same quantity from the radial integral, for any exclusion including 0.
/// Used as the independent cross-check of the z-form.
double laplace_interference_radial(double s, double lambda_eff, double exclusion, double alpha,
                                   const QuadratureSpec& quad);

/// L(beta r^alpha) as a function of the eavesdropper distance r >= r_g,
/// tabulated once per call site. Writing a = r_g / r, the exponent is
/// 2 pi lambda_eff r^2 F(a) with F smooth on [0, 1]; F is interpolated at
/// Chebyshev nodes in a and the interpolant is checked against direct
/// evaluation at 16 pseudo-random points (relative 1e-8). Node counts double
/// up to 256; past that the table falls back to direct evaluation.
class ExclusionLaplaceTable {
 public:
  ExclusionLaplaceTable(double beta, double lambda_eff, double r_g, double alpha,
                        const QuadratureSpec& quad);

  /// L(beta r^alpha) for r >= r_g.
  [[nodiscard]] double operator()(double r) const;
  /// Exponent divided by 2 pi lambda_eff r^2, for a = r_g / r in [0, 1].
  [[nodiscard]] double shape(double a) const;
  [[nodiscard]] double shape_direct(double a) const;

  [[nodiscard]] std::size_t nodes() const { return values_.size(); }
  [[nodiscard]] bool interpolated() const { return !values_.empty(); }

 private:
  double beta_;
  double lambda_eff_;
  double r_g_;
  double alpha_;
  QuadratureSpec quad_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// Secure-communication probability (term "eavesdropper").
MetricBreakdown p_sec(const SystemParams& params, const QuadratureSpec& quad);

/// Noise-limited regime: interference terms dropped.
double p_con_noise_limited(const SystemParams& params);
/// Closed form through Gamma(2/alpha, r_g^alpha beta_s sigma2_s / p_t).
double p_sec_noise_limited(const SystemParams& params);

struct GuardRadius {
  double radius = 0.0;  ///< +inf when infeasible
  bool feasible = true;
};

/// Smallest guard radius meeting p_sec_noise_limited >= epsilon. epsilon = 1
/// is infeasible (radius +inf). Throws std::domain_error when lambda_s or
/// sigma2_s is zero or the root cannot be bracketed.
GuardRadius rg_star_noise_limited(const SystemParams& params);

/// Interference-limited regime: noise terms dropped.
double p_con_int_limited(const SystemParams& params);
MetricBreakdown p_sec_int_limited(const SystemParams& params, const QuadratureSpec& quad);

/// Density of energy receivers harvesting at least e_min from the nearest
/// active transmitter.
double p_energy(const SystemParams& params, const QuadratureSpec& quad);

/// p_energy with the activity factor removed from the contact-distance
/// exponent; never exceeds p_energy.
double p_energy_lower_bound(const SystemParams& params, const QuadratureSpec& quad);

/// Maximizer of p_energy_lower_bound over lambda_s: min(1/(pi r_g^2), cap);
/// the cap when r_g = 0.
double lambda_star_lower_bound(double r_g, double lambda_s_max);

}  // namespace sgz
