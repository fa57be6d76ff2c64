#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracle_helpers.hpp"
#include "udw/quadrature.hpp"
#include "udw/special.hpp"

using namespace udw;

TEST_CASE("theta and sign conventions at zero") {
  CHECK(theta_neg(-0.7) == 1.0);
  CHECK(theta_neg(0.7) == 0.0);
  CHECK(theta_neg(0.0) == 0.5);
  CHECK(signum(3.0) == 1.0);
  CHECK(signum(-3.0) == -1.0);
  CHECK(signum(0.0) == 0.0);
}

TEST_CASE("bessel_j0 frozen reference values") {
  CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // First zero located by the series oracle.
  CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-12);
  CHECK(bessel_j0(5.0) ==
        doctest::Approx(-0.17759677131433830).epsilon(1e-13));
  CHECK(bessel_j0(1.0) == doctest::Approx(0.76519768655796655).epsilon(1e-13));
}

TEST_CASE("bessel_j0 matches the series oracle on [0, 10]") {
  for (double x = 0.0; x <= 10.0; x += 0.125) {
    CAPTURE(x);
    CHECK(std::abs(bessel_j0(x) - oracle::j0_series(x)) < 1e-12);
  }
}

TEST_CASE("bessel_j0 matches independent quadrature on [10, 50]") {
  // Same defining integral, different integration scheme (adaptive panels
  // instead of the periodic rule).
  const double pi = std::numbers::pi;
  for (double x = 10.0; x <= 50.0; x += 2.5) {
    QuadratureOptions opt;
    opt.abs_tol = 1e-13;
    opt.osc_rate = x;
    const double ref =
        integrate_gk15_real([x](double t) { return std::cos(x * std::sin(t)); },
                            0.0, pi, opt) /
        pi;
    CAPTURE(x);
    CHECK(std::abs(bessel_j0(x) - ref) < 1e-11);
  }
}

TEST_CASE("bessel_j0 agrees with the standard library") {
  for (double x = 0.5; x <= 50.0; x += 0.5) {
    CAPTURE(x);
    CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
  }
}

TEST_CASE("bessel_j0 is even and bounded by one on [-50, 50]") {
  for (int i = 0; i <= 1000; ++i) {
    const double x = -50.0 + 0.1 * i;
    CHECK(bessel_j0(x) == bessel_j0(-x));
    CHECK(std::abs(bessel_j0(x)) <= 1.0);
  }
}

TEST_CASE("bessel_j0 rejects non-finite input") {
  CHECK_THROWS_AS(bessel_j0(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("gk15 panel rule integrates polynomials exactly") {
  // Validates the embedded node/weight tables: 15-point Kronrod is exact
  // through degree 22.
  for (int k = 0; k <= 22; ++k) {
    QuadratureOptions opt;
    const double got = integrate_gk15_real(
        [k](double x) { return std::pow(x, k); }, 0.0, 1.0, opt);
    CAPTURE(k);
    CHECK(got == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("gk15 handles oscillatory and peaked integrands") {
  // int_0^10 cos(20 x) dx = sin(200)/20
  QuadratureOptions osc;
  osc.osc_rate = 20.0;
  const double got = integrate_gk15_real(
      [](double x) { return std::cos(20.0 * x); }, 0.0, 10.0, osc);
  CHECK(got == doctest::Approx(std::sin(200.0) / 20.0).epsilon(1e-12));

  // int_{-1}^{1} eps/(x^2 + eps^2) dx = 2 atan(1/eps)
  const double eps = 1e-5;
  QuadratureOptions peak;
  peak.features = {0.0};
  peak.feature_scale = eps;
  const double lorentz = integrate_gk15_real(
      [eps](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0, peak);
  CHECK(lorentz == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-10));
}

TEST_CASE("extrapolate_to_zero recovers polynomial limits") {
  const double xs[3] = {1e-2, 1e-3, 1e-4};
  double ys[3];
  for (int i = 0; i < 3; ++i) {
    ys[i] = 2.0 + 3.0 * xs[i] - 7.0 * xs[i] * xs[i];
  }
  CHECK(extrapolate_to_zero(xs, ys) == doctest::Approx(2.0).epsilon(1e-12));
}
