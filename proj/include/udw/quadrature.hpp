#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace udw {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  // Characteristic |d(phase)/dx| of the integrand.  Panels are kept shorter
  // than one half oscillation period so a single Gauss-Kronrod panel resolves
  // the phase to machine precision.
  double osc_rate = 0.0;
  // Locations of sharp integrable features; the panel grid is refined
  // geometrically into each one down to feature_scale.
  std::vector<double> features;
  double feature_scale = 1e-6;
  int max_refinements = 20000;
};

// Composite adaptive Gauss-Kronrod 7/15 integration of a complex-valued
// integrand over [a, b].  err_out, when non-null, receives the accumulated
// error estimate.
std::complex<double> integrate_gk15(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadratureOptions& opt = {}, double* err_out = nullptr);

double integrate_gk15_real(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt = {},
                           double* err_out = nullptr);

// Value at x = 0 of the interpolating polynomial through (xs[i], ys[i])
// (Neville scheme); used for Richardson extrapolation in the regulator.
double extrapolate_to_zero(std::span<const double> xs,
                           std::span<const double> ys);

}  // namespace udw
