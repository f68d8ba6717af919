#pragma once

namespace sgz {

/// Upper incomplete gamma function Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt
/// for s > 0, x >= 0. Power series below x = s + 1, Lentz continued fraction
/// above; about 1e-14 relative accuracy for s in (0, 1].
double upper_incomplete_gamma(double s, double x);

}  // namespace sgz
