#include "udw/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace udw {

double theta_neg(double nu) {
  if (nu < 0.0) return 1.0;
  if (nu > 0.0) return 0.0;
  return 0.5;
}

double signum(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return 0.0;
}

double bessel_j0(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("bessel_j0: non-finite argument");
  }
  x = std::abs(x);

  // Midpoint rule on J0(x) = (1/pi) int_0^pi cos(x sin t) dt.  The integrand
  // is entire and pi-periodic, so an n-node uniform rule is exact up to the
  // aliased tail 2*sum_{m>=1} J_{2mn}(x), which drops below 1e-17 once
  // 2n > ~1.4 x + 30.
  const int n = std::max(24, static_cast<int>(std::ceil(0.7 * x)) + 18);
  const double h = std::numbers::pi / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += std::cos(x * std::sin(h * (k + 0.5)));
  }
  return sum / n;
}

}  // namespace udw
