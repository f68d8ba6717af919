#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace sgz {

enum class TailPolicy { substitution, truncation };

/// Tolerances for the adaptive integrator. Improper integrals with
/// exponentially decaying integrands either map [a, inf) onto (0, 1] through
/// u = exp(-(r - a) / scale) or are cut at the first R with
/// |f(R)| * R < abs_tol / 10.
struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  std::size_t max_subdivisions = 2000;
  TailPolicy tail_policy = TailPolicy::substitution;
};

/// Returns an empty string when the spec is usable, otherwise the reason.
std::string check(const QuadratureSpec& spec);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegrationResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. Throws
/// QuadratureError when the tolerance is not met within max_subdivisions.
IntegrationResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// Integral of an exponentially decaying f over [a, inf). `scale` is the
/// decay length used by the substitution policy and as the first step of the
/// truncation search.
IntegrationResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                        const QuadratureSpec& spec);

}  // namespace sgz
