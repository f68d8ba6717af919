#include "sgz/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgz {
namespace {

constexpr int kMaxTerms = 1000;
constexpr double kEps = 1e-16;

// Lower incomplete gamma via its power series:
// gamma(s, x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n)).
double lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(s * std::log(x) - x);
}

// Gamma(s, x) = x^s e^-x / (x + 1 - s - 1(1-s)/(x + 3 - s - 2(2-s)/(x + 5 - s - ...)))
// evaluated with the modified Lentz method.
double upper_fraction(double s, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(s * std::log(x) - x) * h;
}

}  // namespace

double upper_incomplete_gamma(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("upper_incomplete_gamma: shape must be positive");
  if (!(x >= 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be non-negative");
  if (x == 0.0) return std::tgamma(s);
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return std::tgamma(s) - lower_series(s, x);
  return upper_fraction(s, x);
}

}  // namespace sgz
