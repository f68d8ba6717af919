#include "sgz/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace sgz {
namespace {

// Kronrod 15-point abscissae (positive half) and weights; the Gauss 7-point
// rule uses every second abscissa.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }
  const double value = kronrod * half;
  const double error = std::abs((kronrod - gauss) * half);
  if (!std::isfinite(value)) {
    throw QuadratureError("non-finite integrand on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  return {a, b, value, error};
}

}  // namespace

std::string check(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0)) return "rel_tol must be positive";
  if (!(spec.abs_tol > 0.0)) return "abs_tol must be positive";
  if (spec.max_subdivisions < 1) return "max_subdivisions must be at least 1";
  return {};
}

IntegrationResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  if (const auto why = check(spec); !why.empty()) throw QuadratureError(why);
  IntegrationResult out;
  if (a == b) return out;

  std::vector<Segment> heap;
  heap.push_back(gk15(f, a, b));
  out.evaluations = 15;
  double total = heap.front().value;
  double error = heap.front().error;

  // Segments too narrow to split further still count toward the error
  // budget; they are set aside rather than bisected forever.
  double frozen_value = 0.0;
  double frozen_error = 0.0;

  std::size_t splits = 0;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (heap.empty() || splits >= spec.max_subdivisions) {
      throw QuadratureError("adaptive quadrature did not converge: estimate " +
                            std::to_string(total) + " +/- " + std::to_string(error));
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                           std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen_value += worst.value;
      frozen_error += worst.error;
    } else {
      for (const Segment& half : {gk15(f, worst.a, mid), gk15(f, mid, worst.b)}) {
        heap.push_back(half);
        std::push_heap(heap.begin(), heap.end());
      }
      out.evaluations += 30;
      ++splits;
    }

    // Re-summing keeps the running totals free of cancellation drift.
    total = frozen_value;
    error = frozen_error;
    for (const Segment& seg : heap) {
      total += seg.value;
      error += seg.error;
    }
    if (heap.empty()) break;
  }
  out.value = total;
  out.abs_error = error;
  return out;
}

IntegrationResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                        const QuadratureSpec& spec) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw QuadratureError("tail scale must be positive and finite");
  }
  if (spec.tail_policy == TailPolicy::substitution) {
    // r = a - scale * ln(u), dr = scale / u du.
    const Integrand g = [&](double u) {
      const double r = a - scale * std::log(u);
      const double v = f(r);
      return v == 0.0 ? 0.0 : v * scale / u;
    };
    return integrate(g, 0.0, 1.0, spec);
  }

  double step = scale;
  double upper = a + step;
  for (int k = 0;; ++k) {
    if (std::abs(f(upper)) * upper < spec.abs_tol / 10.0) break;
    if (k > 200) throw QuadratureError("no truncation point found for tail integral");
    step *= 2.0;
    upper = a + step;
  }
  return integrate(f, a, upper, spec);
}

}  // namespace sgz
