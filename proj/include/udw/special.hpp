#pragma once

namespace udw {

// Heaviside step of -nu with the symmetric midpoint convention
// theta_neg(0) = 1/2.
double theta_neg(double nu);

// Sign function with signum(0) = 0.
double signum(double x);

// Bessel function of the first kind, order zero.  Absolute error below
// 1e-12 for |x| <= 50 (in practice a few ulp).  Throws std::invalid_argument
// on non-finite input.
double bessel_j0(double x);

}  // namespace udw
