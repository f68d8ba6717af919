#include "sgz/params.hpp"

#include <cmath>
#include <limits>

namespace sgz {

double SystemParams::snr_primary() const {
  return sigma2_p > 0.0 ? p_t / sigma2_p : std::numeric_limits<double>::infinity();
}

double SystemParams::snr_secondary() const {
  return sigma2_s > 0.0 ? p_t / sigma2_s : std::numeric_limits<double>::infinity();
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

SystemParams reference_params() {
  SystemParams p;
  p.lambda_p = 1.0;
  p.lambda_s = 0.6;
  p.r_g = 0.3;
  p.r_1 = 0.1;
  p.alpha = 4.0;
  p.beta_p = db_to_linear(3.0);
  p.beta_s = db_to_linear(0.0);
  p.p_t = 1.0;
  p.sigma2_p = p.p_t / db_to_linear(7.0);
  p.sigma2_s = p.p_t / db_to_linear(4.8);
  p.eta = 0.75;
  p.slot_t = 1.0;
  p.e_min = 1e-4;
  p.epsilon = 0.8;
  p.lambda_s_max = 2.0;
  return p;
}

ValidationResult validate(const SystemParams& p) {
  std::vector<std::string> v;
  auto finite_nonneg = [&](double x, const char* name) {
    if (!std::isfinite(x)) {
      v.push_back(std::string(name) + " must be finite");
    } else if (x < 0.0) {
      v.push_back(std::string(name) + " must be non-negative");
    }
  };

  if (!(p.alpha > 2.0) || !std::isfinite(p.alpha)) v.emplace_back("alpha must exceed 2");
  finite_nonneg(p.lambda_p, "lambda_p");
  finite_nonneg(p.lambda_s, "lambda_s");
  finite_nonneg(p.r_g, "r_g");
  finite_nonneg(p.r_1, "r_1");
  finite_nonneg(p.beta_p, "beta_p");
  finite_nonneg(p.beta_s, "beta_s");
  finite_nonneg(p.sigma2_p, "sigma2_p");
  finite_nonneg(p.sigma2_s, "sigma2_s");
  finite_nonneg(p.p_t, "p_t");
  finite_nonneg(p.e_min, "e_min");
  finite_nonneg(p.lambda_s_max, "lambda_s_max");
  if (!(p.slot_t > 0.0) || !std::isfinite(p.slot_t)) v.emplace_back("slot_t must be positive");
  if (!(p.eta > 0.0 && p.eta <= 1.0)) v.emplace_back("eta must be in (0,1]");
  if (!(p.epsilon > 0.0 && p.epsilon <= 1.0)) v.emplace_back("epsilon must be in (0,1]");
  if (p.lambda_s > p.lambda_s_max) v.emplace_back("lambda_s must not exceed lambda_s_max");

  ValidationResult out;
  out.violations = std::move(v);
  if (out.violations.empty()) out.params = p;
  return out;
}

const SystemParams& require_valid(const SystemParams& params) {
  auto res = validate(params);
  if (!res.ok()) throw InvalidParams(std::move(res.violations));
  return params;
}

InvalidParams::InvalidParams(std::vector<std::string> violations)
    : violations_(std::move(violations)) {
  message_ = "invalid parameters:";
  for (const auto& s : violations_) message_ += " " + s + ";";
}

}  // namespace sgz
