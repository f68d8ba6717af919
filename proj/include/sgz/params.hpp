#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace sgz {

/// Physical and network scalars shared by every metric. All quantities are
/// normalized (unitless); thresholds are linear ratios, never dB.
struct SystemParams {
  double lambda_p = 1.0;      ///< primary transmitter density
  double lambda_s = 0.6;      ///< energy receiver density
  double r_g = 0.3;           ///< guard zone radius
  double r_1 = 0.1;           ///< typical link distance
  double alpha = 4.0;         ///< path-loss exponent, > 2
  double beta_p = 1.0;        ///< SINR threshold at the primary receiver
  double beta_s = 1.0;        ///< SINR threshold at energy receivers
  double sigma2_p = 0.0;      ///< noise power at the primary receiver
  double sigma2_s = 0.0;      ///< noise power at energy receivers
  double p_t = 1.0;           ///< transmit power
  double eta = 0.75;          ///< RF-to-DC efficiency in (0, 1]
  double slot_t = 1.0;        ///< slot duration
  double e_min = 1e-4;        ///< harvested-energy threshold
  double epsilon = 0.8;       ///< minimum secure-communication probability
  double lambda_s_max = 2.0;  ///< deployment density cap

  /// p_t / sigma2_p (infinite when noiseless).
  [[nodiscard]] double snr_primary() const;
  /// p_t / sigma2_s (infinite when noiseless).
  [[nodiscard]] double snr_secondary() const;

  bool operator==(const SystemParams&) const = default;
};

/// Parameter set used for the published simulation study: lambda_p=1,
/// eta=0.75, e_min=1e-4, alpha=4, lambda_s_max=2, p_t=1, beta_p=3 dB,
/// beta_s=0 dB, r_1=0.1, epsilon=0.8. Noise powers default to
/// gamma_p=7 dB and gamma_s=4.8 dB; lambda_s=0.6 and r_g=0.3.
SystemParams reference_params();

double db_to_linear(double x_db);
double linear_to_db(double x);

struct ValidationResult {
  std::optional<SystemParams> params;
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return params.has_value(); }
};

/// Checks every invariant and reports all violations, not only the first.
ValidationResult validate(const SystemParams& params);

/// Returns params unchanged or throws InvalidParams listing every violation.
const SystemParams& require_valid(const SystemParams& params);

class InvalidParams : public std::exception {
 public:
  explicit InvalidParams(std::vector<std::string> violations);
  const char* what() const noexcept override { return message_.c_str(); }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
  std::string message_;
};

}  // namespace sgz
