#include "udw/response.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "udw/quadrature.hpp"

namespace udw {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiInv = 1.0 / (4.0 * kPi);

// Geometric regulator ladder for the epsilon -> 0 extrapolation.  A single
// tiny epsilon makes the truncated Fourier integral stiff near the branch
// points; three decades plus polynomial extrapolation is both cheaper and
// more accurate.
constexpr double kEpsilonLadder[3] = {1e-2, 1e-3, 1e-4};

std::complex<double> wightman_raw(double s, double eps, double d) {
  const std::complex<double> w(s, -eps);
  return kFourPiInv / std::sqrt(d * d - w * w);
}

// d/ds of wightman_raw; needed for the second-order truncation-tail term.
std::complex<double> wightman_raw_derivative(double s, double eps, double d) {
  const std::complex<double> w(s, -eps);
  return kFourPiInv * w * std::pow(d * d - w * w, -1.5);
}

std::complex<double> phase(double nu, double s) {
  return std::polar(1.0, -nu * s);
}

// Truncated Fourier transform of f(s) = W(s) or K(s) W(s) over [-T, T].
std::complex<double> fourier_on_interval(
    const std::function<std::complex<double>(double)>& f, double nu, double T,
    double d, double eps) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  opt.osc_rate = std::abs(nu);
  opt.features = (d > 0.0) ? std::vector<double>{-d, d}
                           : std::vector<double>{0.0};
  opt.feature_scale = eps;
  return integrate_gk15(f, -T, T, opt);
}

}  // namespace

RegularizedTime::RegularizedTime(double s_, double epsilon_)
    : s(s_), epsilon(epsilon_) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("RegularizedTime: epsilon must be > 0");
  }
}

DetectorGeometry DetectorGeometry::from_positions(
    const std::array<double, 2>& x1, const std::array<double, 2>& x2,
    double c_s) {
  DetectorGeometry g;
  g.x1 = x1;
  g.x2 = x2;
  g.delta = std::hypot(x1[0] - x2[0], x1[1] - x2[1]);
  g.c_s = c_s;
  g.check();
  return g;
}

DetectorGeometry DetectorGeometry::from_separation(double delta, double c_s) {
  DetectorGeometry g;
  g.x1 = {0.0, 0.0};
  g.x2 = {delta, 0.0};
  g.delta = delta;
  g.c_s = c_s;
  g.check();
  return g;
}

void DetectorGeometry::check() const {
  if (!(c_s > 0.0)) {
    throw std::invalid_argument("DetectorGeometry: c_s must be > 0");
  }
  if (!(delta >= 0.0)) {
    throw std::invalid_argument("DetectorGeometry: delta must be >= 0");
  }
  const double recomputed = std::hypot(x1[0] - x2[0], x1[1] - x2[1]);
  if (std::abs(recomputed - delta) > 1e-12 * std::max(1.0, recomputed)) {
    throw std::logic_error("DetectorGeometry: delta inconsistent with positions");
  }
}

SwitchingWindow SwitchingWindow::constant() {
  return SwitchingWindow{WindowShape::constant, 0.0};
}

SwitchingWindow SwitchingWindow::gaussian(double width) {
  if (!(width > 0.0)) {
    throw std::invalid_argument("SwitchingWindow::gaussian: width must be > 0");
  }
  return SwitchingWindow{WindowShape::gaussian, width};
}

std::complex<double> wightman_diagonal(const RegularizedTime& t) {
  const std::complex<double> w(t.s, -t.epsilon);
  return kFourPiInv / std::sqrt(-(w * w));
}

std::complex<double> wightman_offdiag(const RegularizedTime& t,
                                      const DetectorGeometry& geom) {
  return wightman_raw(t.s, t.epsilon, geom.delta_over_cs());
}

double response_diag(double nu) { return 0.5 * theta_neg(nu); }

double response_offdiag(double nu, double delta_over_cs) {
  if (!(delta_over_cs >= 0.0)) {
    throw std::invalid_argument("response_offdiag: delta_over_cs must be >= 0");
  }
  const double gate = theta_neg(nu);
  if (gate == 0.0) return 0.0;
  return 0.5 * gate * bessel_j0(nu * delta_over_cs);
}

double response_offdiag_numeric_contour(double nu, double delta_over_cs,
                                        int n_nodes) {
  if (n_nodes < 8) {
    throw std::invalid_argument(
        "response_offdiag_numeric_contour: n_nodes must be >= 8");
  }
  if (!(delta_over_cs >= 0.0)) {
    throw std::invalid_argument(
        "response_offdiag_numeric_contour: delta_over_cs must be >= 0");
  }
  const double gate = theta_neg(nu);
  if (gate == 0.0) return 0.0;

  // z = d sin(theta) removes the endpoint singularity; the surviving real
  // part cos(nu d sin theta) is pi-periodic, so the uniform trapezoid on the
  // full interval converges spectrally.  The imaginary part is odd and
  // cancels pairwise.
  const double xarg = nu * delta_over_cs;
  const double h = kPi / n_nodes;
  std::complex<double> sum =
      0.5 * (phase(xarg, std::sin(-0.5 * kPi)) + phase(xarg, std::sin(0.5 * kPi)));
  for (int j = 1; j < n_nodes; ++j) {
    sum += phase(xarg, std::sin(-0.5 * kPi + j * h));
  }
  const std::complex<double> integral = sum * h;
  if (std::abs(integral.imag()) > 1e-10) {
    throw std::logic_error(
        "response_offdiag_numeric_contour: parity residue exceeds 1e-10");
  }
  return gate * integral.real() / (2.0 * kPi);
}

double response_numeric_epsilon(double nu, double delta_over_cs,
                                double epsilon, double t_cutoff) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("response_numeric_epsilon: epsilon must be > 0");
  }
  if (!(delta_over_cs >= 0.0)) {
    throw std::invalid_argument(
        "response_numeric_epsilon: delta_over_cs must be >= 0");
  }
  const double min_cutoff = 50.0 * std::max(delta_over_cs, 1.0);
  if (!(t_cutoff >= min_cutoff)) {
    throw std::invalid_argument(
        "response_numeric_epsilon: t_cutoff below 50*max(delta, 1)");
  }
  // Panel count grows like |nu| * t_cutoff / pi; cap the quadrature cost.
  if (std::abs(nu) * t_cutoff > 2e6) {
    throw std::invalid_argument(
        "response_numeric_epsilon: |nu| * t_cutoff too large to integrate");
  }

  const double d = delta_over_cs;
  const double T = t_cutoff;
  auto integrand = [nu, eps = epsilon, d](double s) {
    return phase(nu, s) * wightman_raw(s, eps, d);
  };
  std::complex<double> result =
      fourier_on_interval(integrand, nu, T, d, epsilon);

  // Two-term integration-by-parts estimate of the discarded tails
  // int_{|s|>T} exp(-i nu s) W(s) ds.  W(-s) = conj(W(s)) keeps the
  // correction real.
  if (std::abs(nu) > 1e-12) {
    const std::complex<double> c(0.0, nu);
    const std::complex<double> wp = wightman_raw(T, epsilon, d);
    const std::complex<double> wm = wightman_raw(-T, epsilon, d);
    const std::complex<double> dwp = wightman_raw_derivative(T, epsilon, d);
    const std::complex<double> dwm = wightman_raw_derivative(-T, epsilon, d);
    result += (wp * phase(nu, T) - wm * phase(nu, -T)) / c;
    result += (dwp * phase(nu, T) - dwm * phase(nu, -T)) / (c * c);
  }
  return result.real();
}

double response_numeric_epsilon_extrapolated(double nu, double delta_over_cs,
                                             double t_cutoff) {
  if (t_cutoff <= 0.0) {
    t_cutoff = std::max(300.0, 50.0 * std::max(delta_over_cs, 1.0));
  }
  double values[3];
  for (int i = 0; i < 3; ++i) {
    values[i] =
        response_numeric_epsilon(nu, delta_over_cs, kEpsilonLadder[i], t_cutoff);
  }
  return extrapolate_to_zero(kEpsilonLadder, values);
}

double total_response(double nu, double delta_over_cs) {
  return 2.0 * response_diag(nu) + 2.0 * response_offdiag(nu, delta_over_cs);
}

double diff_response(double nu, double delta_over_cs) {
  return 2.0 * response_diag(nu) - 2.0 * response_offdiag(nu, delta_over_cs);
}

double transition_probability(double nu, const SwitchingWindow& window,
                              const DetectorGeometry& geom,
                              ResponseKind kind) {
  if (window.shape != WindowShape::gaussian) {
    throw std::invalid_argument(
        "transition_probability: finite probabilities need a gaussian window; "
        "use the response functions for constant switching");
  }
  if (!(window.width > 0.0)) {
    throw std::invalid_argument("transition_probability: window width must be > 0");
  }
  const double T = window.width;
  const double d =
      (kind == ResponseKind::offdiagonal) ? geom.delta_over_cs() : 0.0;
  // K(s) decays like exp(-s^2/(4T^2)); 14 widths push the cut-off error to
  // ~1e-21 while still covering the branch points.
  const double L = std::max(14.0 * T, d + 10.0);
  if (std::abs(nu) * L > 2e6) {
    throw std::invalid_argument(
        "transition_probability: |nu| * window range too large to integrate");
  }
  const double norm = T * std::sqrt(kPi);

  double values[3];
  for (int i = 0; i < 3; ++i) {
    const double eps = kEpsilonLadder[i];
    auto integrand = [nu, eps, d, T, norm](double s) {
      const double window_acf = norm * std::exp(-s * s / (4.0 * T * T));
      return window_acf * phase(nu, s) * wightman_raw(s, eps, d);
    };
    const std::complex<double> p = fourier_on_interval(integrand, nu, L, d, eps);
    if (std::abs(p.imag()) > 1e-8 * (1.0 + std::abs(p.real()))) {
      throw std::logic_error(
          "transition_probability: imaginary residue exceeds tolerance");
    }
    values[i] = p.real();
  }
  return extrapolate_to_zero(kEpsilonLadder, values);
}

double transition_rate(double nu, const SwitchingWindow& window,
                       const DetectorGeometry& geom, ResponseKind kind) {
  return transition_probability(nu, window, geom, kind) /
         (window.width * std::sqrt(kPi));
}

double total_transition_probability(double nu, const SwitchingWindow& window,
                                    const DetectorGeometry& geom,
                                    double coupling_lambda) {
  const double diag =
      transition_probability(nu, window, geom, ResponseKind::diagonal);
  const double offdiag =
      transition_probability(nu, window, geom, ResponseKind::offdiagonal);
  return 0.25 * coupling_lambda * coupling_lambda * (2.0 * diag + 2.0 * offdiag);
}

}  // namespace udw
