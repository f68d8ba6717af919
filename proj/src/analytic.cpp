#include "sgz/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "sgz/rng.hpp"
#include "sgz/special.hpp"

namespace sgz {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

// 2 pi^2 / (alpha sin(2 pi / alpha)): L(s) = exp(-lambda * kappa * s^(2/alpha))
// for an unbounded PPP.
double kappa(double alpha) { return 2.0 * pi * pi / (alpha * std::sin(2.0 * pi / alpha)); }

MetricBreakdown single_exponential(std::vector<std::pair<std::string, double>> terms) {
  MetricBreakdown out;
  out.terms = std::move(terms);
  const double e = out.exponent();
  if (std::isinf(e)) {
    out.value = 0.0;
    out.divergent = true;
  } else {
    out.value = std::exp(-e);
  }
  return out;
}

// int_0^{s exclusion^-alpha} s^(2/alpha) / (alpha (1+z) z^(2/alpha)) dz.
// With z = v^m, m = alpha/(alpha-2), the integrand becomes m/(alpha (1+v^m)),
// which is smooth; for long ranges the complement is integrated instead,
// mapped by v = q^(-1/(m-1)) onto a short interval.
double zform_exponent(double s, double exclusion, double alpha, const QuadratureSpec& quad) {
  if (s == 0.0) return 0.0;
  const double m = alpha / (alpha - 2.0);
  const double full = (pi / m) / std::sin(pi / m);
  double h = full;
  if (exclusion > 0.0) {
    const double log_v = (std::log(s) - alpha * std::log(exclusion)) / m;
    if (log_v <= 0.0) {
      const double v = std::exp(log_v);
      h = integrate([m](double t) { return 1.0 / (1.0 + std::pow(t, m)); }, 0.0, v, quad).value;
    } else {
      const double q_max = std::exp((1.0 - m) * log_v);
      const double p = m / (m - 1.0);
      const double tail =
          integrate([p](double q) { return 1.0 / (1.0 + std::pow(q, p)); }, 0.0, q_max, quad)
              .value;
      h = full - tail / (m - 1.0);
    }
  }
  return std::pow(s, 2.0 / alpha) * (m / alpha) * h;
}

// int_exclusion^inf s r / (r^alpha + s) dr. The head up to the knee
// r0 = s^(1/alpha) is integrated directly; the algebraic tail through
// x = r^(2-alpha), which turns it into (s/(alpha-2)) int_0^{r0^(2-alpha)}
// dx / (1 + s x^(alpha/(alpha-2))).
double radial_exponent(double s, double exclusion, double alpha, const QuadratureSpec& quad) {
  if (s == 0.0) return 0.0;
  const double knee = std::max(exclusion, std::pow(s, 1.0 / alpha));
  double head = 0.0;
  if (knee > exclusion) {
    head = integrate([&](double r) { return s * r / (std::pow(r, alpha) + s); }, exclusion, knee,
                     quad)
               .value;
  }
  const double x_max = std::pow(knee, 2.0 - alpha);
  const double power = alpha / (alpha - 2.0);
  const double tail =
      integrate([&](double x) { return 1.0 / (1.0 + s * std::pow(x, power)); }, 0.0, x_max, quad)
          .value;
  return head + s * tail / (alpha - 2.0);
}

// Decay length of exp(-c r^alpha) style factors, used to scale the tail map.
double decay_length_power(double coeff, double alpha) {
  return coeff > 0.0 ? std::pow(coeff, -1.0 / alpha) : inf;
}

}  // namespace

double MetricBreakdown::exponent() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.second;
  return sum;
}

double MetricBreakdown::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.first == name) return t.second;
  }
  throw std::out_of_range("no exponent term named " + std::string(name));
}

double p_active(double lambda_s, double r_g) { return std::exp(-lambda_s * pi * r_g * r_g); }

double threshold_a1(const SystemParams& p) {
  return kappa(p.alpha) * p.lambda_p * std::pow(p.beta_p, 2.0 / p.alpha) * p.r_1 * p.r_1;
}

MetricBreakdown p_con(const SystemParams& p) {
  const double activity = p.lambda_s * pi * p.r_g * p.r_g;
  const double noise = p.sigma2_p == 0.0 ? 0.0 : p.beta_p * (p.sigma2_p / p.p_t) * std::pow(p.r_1, p.alpha);
  const double interference = threshold_a1(p) * p_active(p.lambda_s, p.r_g);
  return single_exponential({{"activity", activity}, {"noise", noise}, {"interference", interference}});
}

double unconstrained_optimal_rg(const SystemParams& p) {
  const double a1 = threshold_a1(p);
  if (a1 <= 1.0) return 0.0;
  if (p.lambda_s <= 0.0) {
    throw std::domain_error("optimal guard radius is unbounded when lambda_s = 0 and a1 > 1");
  }
  return std::sqrt(std::log(a1) / (pi * p.lambda_s));
}

double p_con_upper_bound(const SystemParams& p) {
  SystemParams at = p;
  // With lambda_s = 0 the connection probability does not depend on r_g.
  at.r_g = p.lambda_s > 0.0
               ? std::sqrt(std::log(std::max(threshold_a1(p), 1.0)) / (pi * p.lambda_s))
               : 0.0;
  return p_con(at).value;
}

double laplace_interference_closed_form(double s, double lambda_eff, double alpha) {
  if (s == 0.0 || lambda_eff == 0.0) return 1.0;
  return std::exp(-lambda_eff * kappa(alpha) * std::pow(s, 2.0 / alpha));
}

double laplace_interference(double s, double lambda_eff, double exclusion, double alpha,
                            const QuadratureSpec& quad) {
  if (s == 0.0 || lambda_eff == 0.0) return 1.0;
  if (exclusion == 0.0) return laplace_interference_closed_form(s, lambda_eff, alpha);
  return std::exp(-2.0 * pi * lambda_eff * zform_exponent(s, exclusion, alpha, quad));
}

double laplace_interference_radial(double s, double lambda_eff, double exclusion, double alpha,
                                   const QuadratureSpec& quad) {
  if (s == 0.0 || lambda_eff == 0.0) return 1.0;
  return std::exp(-2.0 * pi * lambda_eff * radial_exponent(s, exclusion, alpha, quad));
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kFirstNodes = 16;
constexpr std::size_t kMaxNodes = 256;
constexpr std::size_t kChecks = 16;
constexpr double kCheckTol = 1e-8;
// Below this a = r_g / r, F(a) - F(0) ~ a^2 / 2 is under double resolution.
constexpr double kSmallA = 1e-8;
}  // namespace

ExclusionLaplaceTable::ExclusionLaplaceTable(double beta, double lambda_eff, double r_g,
                                             double alpha, const QuadratureSpec& quad)
    : beta_(beta), lambda_eff_(lambda_eff), r_g_(r_g), alpha_(alpha), quad_(quad) {
  if (r_g_ == 0.0 || lambda_eff_ == 0.0 || beta_ == 0.0) return;

  std::vector<double> probes(kChecks);
  Engine engine(0x5eedULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& a : probes) a = 1.0 - unit(engine);  // (0, 1]
  std::vector<double> expected(kChecks);
  for (std::size_t j = 0; j < kChecks; ++j) expected[j] = shape_direct(probes[j]);

  for (std::size_t n = kFirstNodes; n <= kMaxNodes; n *= 2) {
    nodes_.resize(n);
    values_.resize(n);
    weights_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      nodes_[k] = 0.5 * (1.0 + std::cos(theta));
      values_[k] = shape_direct(nodes_[k]);
      weights_[k] = (k % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
    }
    bool ok = true;
    for (std::size_t j = 0; j < kChecks && ok; ++j) {
      ok = std::abs(shape(probes[j]) - expected[j]) <= kCheckTol * std::abs(expected[j]);
    }
    if (ok) return;
  }
  nodes_.clear();
  values_.clear();
  weights_.clear();
}

double ExclusionLaplaceTable::shape_direct(double a) const {
  if (a < kSmallA) return std::pow(beta_, 2.0 / alpha_) * kappa(alpha_) / (2.0 * pi);
  const double r = r_g_ / a;
  return zform_exponent(beta_ * std::pow(r, alpha_), r_g_, alpha_, quad_) / (r * r);
}

double ExclusionLaplaceTable::shape(double a) const {
  if (values_.empty()) return shape_direct(a);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double diff = a - nodes_[k];
    if (diff == 0.0) return values_[k];
    const double w = weights_[k] / diff;
    num += w * values_[k];
    den += w;
  }
  return num / den;
}

double ExclusionLaplaceTable::operator()(double r) const {
  if (lambda_eff_ == 0.0 || beta_ == 0.0) return 1.0;
  if (r_g_ == 0.0) {
    return laplace_interference_closed_form(beta_ * std::pow(r, alpha_), lambda_eff_, alpha_);
  }
  const double a = std::clamp(r_g_ / r, 0.0, 1.0);
  return std::exp(-2.0 * pi * lambda_eff_ * r * r * shape(a));
}

// ---------------------------------------------------------------------------

MetricBreakdown p_sec(const SystemParams& p, const QuadratureSpec& quad) {
  if (p.lambda_s == 0.0) return single_exponential({{"eavesdropper", 0.0}});

  const double lambda_eff = p.lambda_p * p_active(p.lambda_s, p.r_g);
  const double noise_coeff = p.sigma2_s * p.beta_s / p.p_t;
  const bool interference_decay = lambda_eff > 0.0 && p.beta_s > 0.0;
  if (noise_coeff == 0.0 && !interference_decay) {
    return single_exponential({{"eavesdropper", inf}});
  }

  const ExclusionLaplaceTable laplace(p.beta_s, lambda_eff, p.r_g, p.alpha, quad);
  double scale = decay_length_power(noise_coeff, p.alpha);
  if (interference_decay) {
    const double c = lambda_eff * kappa(p.alpha) * std::pow(p.beta_s, 2.0 / p.alpha);
    scale = std::min(scale, 1.0 / std::sqrt(c));
  }
  const auto integrand = [&](double r) {
    const double noise = noise_coeff == 0.0 ? 1.0 : std::exp(-noise_coeff * std::pow(r, p.alpha));
    if (noise == 0.0) return 0.0;
    return noise * laplace(r) * r;
  };
  const double integral = integrate_to_infinity(integrand, p.r_g, scale, quad).value;
  return single_exponential({{"eavesdropper", 2.0 * pi * p.lambda_s * integral}});
}

double p_con_noise_limited(const SystemParams& p) {
  SystemParams q = p;
  q.lambda_p = 0.0;
  return p_con(q).value;
}

double p_sec_noise_limited(const SystemParams& p) {
  if (p.lambda_s == 0.0) return 1.0;
  const double noise_coeff = p.sigma2_s * p.beta_s / p.p_t;
  if (noise_coeff == 0.0) return 0.0;
  const double shape = 2.0 / p.alpha;
  const double g = upper_incomplete_gamma(shape, std::pow(p.r_g, p.alpha) * noise_coeff);
  const double exponent = (2.0 * pi * p.lambda_s / p.alpha) * std::pow(noise_coeff, -shape) * g;
  return std::exp(-exponent);
}

GuardRadius rg_star_noise_limited(const SystemParams& p) {
  if (!(p.lambda_s > 0.0)) throw std::domain_error("rg_star_noise_limited needs lambda_s > 0");
  const double noise_coeff = p.sigma2_s * p.beta_s / p.p_t;
  if (!(noise_coeff > 0.0)) throw std::domain_error("rg_star_noise_limited needs sigma2_s > 0");
  if (!(p.epsilon > 0.0 && p.epsilon <= 1.0)) throw std::domain_error("epsilon must be in (0,1]");
  if (p.epsilon == 1.0) return {inf, false};

  const double shape = 2.0 / p.alpha;
  const double complete = std::tgamma(shape);
  const double demand = p.alpha * std::log(1.0 / p.epsilon) /
                        (2.0 * pi * p.lambda_s * std::pow(noise_coeff, -shape));
  if (demand >= complete) return {0.0, true};

  const auto residual = [&](double x) { return upper_incomplete_gamma(shape, x) - demand; };
  double hi = 1.0;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e4) throw std::domain_error("guard radius root not bracketed");
  }
  std::uintmax_t iters = 200;
  const auto [lo_x, hi_x] = boost::math::tools::toms748_solve(
      residual, 0.0, hi, complete - demand, residual(hi),
      boost::math::tools::eps_tolerance<double>(52), iters);
  const double x = 0.5 * (lo_x + hi_x);
  return {std::pow(x / noise_coeff, 1.0 / p.alpha), true};
}

double p_con_int_limited(const SystemParams& p) {
  SystemParams q = p;
  q.sigma2_p = 0.0;
  return p_con(q).value;
}

MetricBreakdown p_sec_int_limited(const SystemParams& p, const QuadratureSpec& quad) {
  SystemParams q = p;
  q.sigma2_s = 0.0;
  return p_sec(q, quad);
}

namespace {

// lambda_s * int_{r_g}^inf 2 pi lambda_c P r exp(-pi lambda_c (r^2 - r_g^2)
//   - e_min r^alpha / (p_t eta T)) dr, with prefactor density lambda_pre.
double energy_integral(const SystemParams& p, double lambda_pre, double lambda_c,
                       const QuadratureSpec& quad) {
  if (p.lambda_s == 0.0 || lambda_pre == 0.0 || lambda_c == 0.0) return 0.0;
  const double energy_coeff = p.e_min / (p.p_t * p.eta * p.slot_t);
  double scale = std::min(decay_length_power(energy_coeff, p.alpha), 1.0 / std::sqrt(pi * lambda_c));
  if (p.r_g > 0.0) scale = std::min(scale, 1.0 / (2.0 * pi * lambda_c * p.r_g));
  const double rg2 = p.r_g * p.r_g;
  const auto integrand = [&](double r) {
    const double e = pi * lambda_c * (r * r - rg2) + energy_coeff * std::pow(r, p.alpha);
    return 2.0 * pi * lambda_pre * r * std::exp(-e);
  };
  return p.lambda_s * integrate_to_infinity(integrand, p.r_g, scale, quad).value;
}

}  // namespace

double p_energy(const SystemParams& p, const QuadratureSpec& quad) {
  const double lambda_eff = p.lambda_p * p_active(p.lambda_s, p.r_g);
  return energy_integral(p, lambda_eff, lambda_eff, quad);
}

double p_energy_lower_bound(const SystemParams& p, const QuadratureSpec& quad) {
  const double lambda_eff = p.lambda_p * p_active(p.lambda_s, p.r_g);
  return energy_integral(p, lambda_eff, p.lambda_p, quad);
}

double lambda_star_lower_bound(double r_g, double lambda_s_max) {
  if (r_g <= 0.0) return lambda_s_max;
  return std::min(1.0 / (pi * r_g * r_g), lambda_s_max);
}

}  // namespace sgz
