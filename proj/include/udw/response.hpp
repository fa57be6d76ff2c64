#pragma once

#include <array>
#include <complex>

#include "udw/special.hpp"

namespace udw {

// Proper-time difference carrying the i*epsilon regularization displacement.
// epsilon must be strictly positive; the distributional limit is taken by
// extrapolation, never by setting epsilon = 0.
struct RegularizedTime {
  double s;
  double epsilon;
  RegularizedTime(double s, double epsilon);
};

// Two static planar detector positions, their separation and the propagation
// speed of the medium.  delta is recomputed from the positions and asserted.
struct DetectorGeometry {
  std::array<double, 2> x1{0.0, 0.0};
  std::array<double, 2> x2{0.0, 0.0};
  double delta = 0.0;
  double c_s = 1.0;

  static DetectorGeometry from_positions(const std::array<double, 2>& x1,
                                         const std::array<double, 2>& x2,
                                         double c_s);
  static DetectorGeometry from_separation(double delta, double c_s);

  double delta_over_cs() const { return delta / c_s; }
  void check() const;
};

enum class WindowShape { constant, gaussian };

// Detector switching profile eta(tau).  The gaussian form is
// exp(-tau^2 / (2 T^2)) with unit peak.
struct SwitchingWindow {
  WindowShape shape = WindowShape::constant;
  double width = 0.0;  // gaussian width parameter T

  static SwitchingWindow constant();
  static SwitchingWindow gaussian(double width);
};

enum class ResponseKind { diagonal, offdiagonal };

// Vacuum Wightman function of the massless (2+1)-d field pulled back to one
// static trajectory: (1/4pi) (-(s - i eps)^2)^(-1/2), principal branch.
std::complex<double> wightman_diagonal(const RegularizedTime& t);

// Two-location version, separation delta = |x1 - x2|:
// (1/4pi) (delta^2 - (s - i eps)^2)^(-1/2).  Times are measured in units
// where c_s = 1, so the separation enters as geom.delta_over_cs().
// Reduces to wightman_diagonal when delta = 0.
std::complex<double> wightman_offdiag(const RegularizedTime& t,
                                      const DetectorGeometry& geom);

// Constant-switching response functions (closed forms).
double response_diag(double nu);
double response_offdiag(double nu, double delta_over_cs);

// Contour-reduced off-diagonal response,
//   (1/2pi) Theta(-nu) int_{-d}^{d} dz exp(-i nu z)/sqrt(d^2 - z^2),
// evaluated after z = d sin(theta) (endpoint singularity removed) with an
// n_nodes-point uniform trapezoid.  Spectrally accurate; serves as the first
// numerical oracle for response_offdiag.
double response_offdiag_numeric_contour(double nu, double delta_over_cs,
                                        int n_nodes);

// Direct regularized Fourier transform of the off-diagonal Wightman function
// truncated at +-t_cutoff, with two-term integration-by-parts tail
// corrections.  Converges to response_offdiag as epsilon -> 0+ and
// t_cutoff -> infinity; the second, fully independent numerical oracle.
double response_numeric_epsilon(double nu, double delta_over_cs,
                                double epsilon, double t_cutoff);

// Richardson extrapolation of response_numeric_epsilon over the geometric
// epsilon ladder {1e-2, 1e-3, 1e-4}.  t_cutoff <= 0 selects
// max(300, 50 max(delta, 1)).
double response_numeric_epsilon_extrapolated(double nu, double delta_over_cs,
                                             double t_cutoff = 0.0);

// Assembled branch responses: F = F11 + F12 + F21 + F22 and the
// beamsplitter "difference" combination F11 + F22 - F12 - F21.
double total_response(double nu, double delta_over_cs);
double diff_response(double nu, double delta_over_cs);

// Finite-window transition probability P_ij for a gaussian switching window.
// For stationary W the double time integral collapses to
//   int ds K(s) exp(-i nu s) W_ij(s),  K(s) = T sqrt(pi) exp(-s^2/(4 T^2)),
// evaluated with the regularized Wightman function and epsilon
// extrapolation.  P/(T sqrt(pi)) tends to the constant-switching response as
// T grows.
double transition_probability(double nu, const SwitchingWindow& window,
                              const DetectorGeometry& geom, ResponseKind kind);
double transition_rate(double nu, const SwitchingWindow& window,
                       const DetectorGeometry& geom, ResponseKind kind);

// lambda^2/4 * sum_ij P_ij for the equal-weight two-branch control state.
// The overall coupling lambda is an optional scale, default 1.
double total_transition_probability(double nu, const SwitchingWindow& window,
                                    const DetectorGeometry& geom,
                                    double coupling_lambda = 1.0);

}  // namespace udw
