#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracle_helpers.hpp"
#include "udw/quadrature.hpp"
#include "udw/response.hpp"
#include "udw/rng.hpp"

using namespace udw;

namespace {
constexpr double kHalfJ0At1 = 0.38259884327898328;  // J0(1)/2, series oracle
constexpr double kJ0At1 = 0.76519768655796655;
}  // namespace

TEST_CASE("RegularizedTime rejects nonpositive epsilon") {
  CHECK_THROWS_AS(RegularizedTime(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RegularizedTime(1.0, -1e-6), std::invalid_argument);
}

TEST_CASE("DetectorGeometry recomputes and validates the separation") {
  const auto g = DetectorGeometry::from_positions({0.0, 0.0}, {3.0, 4.0}, 1.0);
  CHECK(g.delta == doctest::Approx(5.0));
  CHECK_THROWS_AS(DetectorGeometry::from_separation(-1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DetectorGeometry::from_separation(1.0, 0.0),
                  std::invalid_argument);
  DetectorGeometry bad = g;
  bad.delta = 4.0;
  CHECK_THROWS_AS(bad.check(), std::logic_error);
}

TEST_CASE("wightman_diagonal coincidence limit is real") {
  const auto w = wightman_diagonal(RegularizedTime(0.0, 1e-3));
  CHECK(w.real() == doctest::Approx(79.577471545947667).epsilon(1e-12));
  CHECK(std::abs(w.imag()) < 1e-18);
}

TEST_CASE("wightman_diagonal magnitude at unit separation") {
  const auto w = wightman_diagonal(RegularizedTime(1.0, 1e-8));
  CHECK(std::abs(w) == doctest::Approx(0.07957747154594767).epsilon(1e-12));
}

TEST_CASE("wightman_diagonal conjugate symmetry at finite epsilon") {
  for (double s : {0.3, 1.7}) {
    const auto wp = wightman_diagonal(RegularizedTime(s, 1e-4));
    const auto wm = wightman_diagonal(RegularizedTime(-s, 1e-4));
    CAPTURE(s);
    CHECK(std::abs(wm - std::conj(wp)) < 1e-12 * std::abs(wp));
  }
}

TEST_CASE("wightman_offdiag reduces to the diagonal at delta = 0") {
  const auto geom = DetectorGeometry::from_separation(0.0, 1.0);
  for (double s : {0.1, 1.0, 10.0}) {
    const RegularizedTime t(s, 1e-4);
    CAPTURE(s);
    CHECK(wightman_offdiag(t, geom) == wightman_diagonal(t));
  }
}

TEST_CASE("wightman_offdiag branch structure") {
  const auto geom = DetectorGeometry::from_separation(2.0, 1.0);
  // Spacelike: purely real 1/(4 pi delta).
  const auto spacelike = wightman_offdiag(RegularizedTime(0.0, 1e-8), geom);
  CHECK(spacelike.real() ==
        doctest::Approx(0.039788735772973836).epsilon(1e-12));
  CHECK(std::abs(spacelike.imag()) < 1e-15);
  // Timelike: the prescription picks the -i branch, magnitude 1/(4 pi sqrt 5).
  const auto timelike = wightman_offdiag(RegularizedTime(3.0, 1e-6), geom);
  CHECK(std::abs(timelike) ==
        doctest::Approx(0.035588127170858853).epsilon(1e-10));
  CHECK(timelike.imag() < 0.0);
  CHECK(std::abs(timelike.imag()) ==
        doctest::Approx(0.035588127170858853).epsilon(1e-6));
}

TEST_CASE("branch consistency on an s-grid") {
  const auto geom = DetectorGeometry::from_separation(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double s = -5.0 + 0.1 * (i + 0.5);
    const RegularizedTime t(s, 1e-4);
    CHECK(wightman_offdiag(t, geom) == wightman_diagonal(t));
  }
}

TEST_CASE("response_diag step values") {
  CHECK(response_diag(-0.7) == 0.5);
  CHECK(response_diag(0.7) == 0.0);
  CHECK(response_diag(0.0) == 0.25);
}

TEST_CASE("response_offdiag closed form") {
  CHECK(response_offdiag(-3.0, 0.0) == 0.5);
  CHECK(std::abs(response_offdiag(-1.0, 2.404825557695773)) < 1e-12);
  CHECK(response_offdiag(1.0, 5.0) == 0.0);
  // Even in the J0 argument: only |nu| d matters below threshold sign.
  CHECK(response_offdiag(-2.0, 1.5) ==
        doctest::Approx(0.5 * oracle::j0_series(3.0)).epsilon(1e-12));
}

TEST_CASE("contour quadrature matches the closed form") {
  CHECK(std::abs(response_offdiag_numeric_contour(-1.0, 1.0, 512) -
                 kHalfJ0At1) < 1e-10);
  CHECK(response_offdiag_numeric_contour(-1.0, 0.0, 512) == 0.5);
  CHECK(response_offdiag_numeric_contour(2.0, 1.0, 512) == 0.0);
  CHECK_THROWS_AS(response_offdiag_numeric_contour(-1.0, 1.0, 7),
                  std::invalid_argument);
}

TEST_CASE("epsilon route at a single regulator value") {
  // At finite epsilon the exact value is exp(eps*nu)/2 * J0(nu d); the
  // truncated integral must sit within the quadrature+tail budget of it.
  const double f = response_numeric_epsilon(-1.0, 1.0, 1e-3, 200.0);
  CHECK(std::abs(f - std::exp(-1e-3) * kHalfJ0At1) < 1e-6);
  CHECK(std::abs(f - kHalfJ0At1) < 1e-2);  // epsilon-limited agreement
}

TEST_CASE("epsilon route obeys the exact regulator law") {
  // The untruncated regularized transform is exp(eps*nu) F0(nu) exactly
  // (shifting the contour below the branch points leaves the integral
  // invariant); the truncated route with tail corrections must reproduce it
  // within the quadrature budget, at every ladder rung.
  for (double nu : {-0.5, -2.0}) {
    for (double d : {0.5, 2.0}) {
      for (double eps : {1e-2, 1e-3}) {
        const double exact =
            std::exp(eps * nu) * 0.5 * oracle::j0_series(nu * d);
        const double got = response_numeric_epsilon(nu, d, eps, 300.0);
        CAPTURE(nu);
        CAPTURE(d);
        CAPTURE(eps);
        CHECK(std::abs(got - exact) < 1e-6);
      }
    }
  }
}

TEST_CASE("epsilon extrapolation tightens the estimate") {
  CHECK(std::abs(response_numeric_epsilon_extrapolated(-1.0, 1.0) -
                 kHalfJ0At1) < 1e-4);
}

TEST_CASE("epsilon route reproduces the single-location limit") {
  CHECK(std::abs(response_numeric_epsilon_extrapolated(-1.0, 0.0) - 0.5) <
        1e-3);
}

TEST_CASE("epsilon route has no positive-frequency support") {
  CHECK(std::abs(response_numeric_epsilon_extrapolated(1.0, 1.0)) < 1e-3);
}

TEST_CASE("epsilon route rejects bad arguments") {
  CHECK_THROWS_AS(response_numeric_epsilon(-1.0, 1.0, 0.0, 200.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(response_numeric_epsilon(-1.0, 1.0, -1e-3, 200.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(response_numeric_epsilon(-1.0, 1.0, 1e-3, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(response_numeric_epsilon(-1.0, 3.0, 1e-3, 100.0),
                  std::invalid_argument);  // below 50*delta
  CHECK_THROWS_AS(response_numeric_epsilon(-1e6, 1.0, 1e-3, 300.0),
                  std::invalid_argument);  // oscillation cost cap
}

TEST_CASE("oracle triangle on a coarse grid") {
  for (double nu : {-0.5, -2.0}) {
    for (double d : {0.5, 2.0}) {
      const double closed = response_offdiag(nu, d);
      const double contour = response_offdiag_numeric_contour(nu, d, 512);
      const double eps = response_numeric_epsilon_extrapolated(nu, d);
      CAPTURE(nu);
      CAPTURE(d);
      CHECK(std::abs(closed - contour) < 1e-3);
      CHECK(std::abs(closed - eps) < 1e-3);
      CHECK(std::abs(contour - eps) < 1e-3);
    }
  }
}

TEST_CASE("total and difference responses") {
  CHECK(total_response(-1e-12, 3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(diff_response(-1e-12, 3.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(total_response(-1.0, 1.0) ==
        doctest::Approx(1.0 + kJ0At1).epsilon(1e-13));
  CHECK(diff_response(-1.0, 1.0) ==
        doctest::Approx(1.0 - kJ0At1).epsilon(1e-13));
  CHECK(total_response(0.5, 1.0) == 0.0);
  CHECK(diff_response(0.5, 1.0) == 0.0);
}

TEST_CASE("branch responses: sum identity and bounds") {
  const GaussianStream rng(7, 0);
  for (int i = 0; i < 500; ++i) {
    const double nu = -5.0 * rng.uniform(2 * i);
    const double d = 5.0 * rng.uniform(2 * i + 1);
    const double tot = total_response(nu, d);
    const double dif = diff_response(nu, d);
    CAPTURE(nu);
    CAPTURE(d);
    CHECK(tot + dif == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(tot >= 0.0);
    CHECK(tot <= 2.0);
    CHECK(dif >= 0.0);
    CHECK(dif <= 2.0);
  }
}

TEST_CASE("all response components vanish for positive frequencies") {
  const GaussianStream rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    const double nu = 5.0 * rng.uniform(2 * i) + 1e-6;
    const double d = 5.0 * rng.uniform(2 * i + 1);
    CHECK(response_diag(nu) == 0.0);
    CHECK(response_offdiag(nu, d) == 0.0);
    CHECK(total_response(nu, d) == 0.0);
    CHECK(diff_response(nu, d) == 0.0);
  }
}

TEST_CASE("transition rate converges to the constant-switching response") {
  const auto geom1 = DetectorGeometry::from_separation(1.0, 1.0);
  double dev_prev = 1.0;
  for (double T : {5.0, 10.0, 20.0}) {
    const double rate = transition_rate(-1.0, SwitchingWindow::gaussian(T),
                                        geom1, ResponseKind::offdiagonal);
    const double dev = std::abs(rate - kHalfJ0At1) / kHalfJ0At1;
    CAPTURE(T);
    CHECK(dev < dev_prev);  // monotone approach
    dev_prev = dev;
  }
  CHECK(dev_prev < 0.02);

  // Same limit at delta = 0 against the single-location value 1/2.
  const auto geom0 = DetectorGeometry::from_separation(0.0, 1.0);
  const double rate0 = transition_rate(-1.0, SwitchingWindow::gaussian(20.0),
                                       geom0, ResponseKind::offdiagonal);
  CHECK(std::abs(rate0 - 0.5) / 0.5 < 0.02);
  const double rate_diag = transition_rate(
      -1.0, SwitchingWindow::gaussian(20.0), geom1, ResponseKind::diagonal);
  CHECK(std::abs(rate_diag - 0.5) / 0.5 < 0.02);
}

TEST_CASE("transition rate agrees with the frequency-space smoothing oracle") {
  // The windowed probability is, equivalently, the constant-switching
  // response seen through a gaussian of width 1/T in frequency:
  //   P/(T sqrt(pi)) = (T/sqrt(pi)) int du F(u) exp(-T^2 (nu - u)^2).
  // Evaluating that convolution directly (series-backed J0, adaptive
  // panels) is independent of the time-domain regularized route.
  struct Case {
    double nu, d, T;
  };
  for (const Case& c : {Case{-1.0, 1.0, 5.0}, Case{-1.5, 0.8, 8.0}}) {
    const auto geom = DetectorGeometry::from_separation(c.d, 1.0);
    const double rate = transition_rate(c.nu, SwitchingWindow::gaussian(c.T),
                                        geom, ResponseKind::offdiagonal);
    const double lo = c.nu - 12.0 / c.T;
    const double hi = std::min(0.0, c.nu + 12.0 / c.T);
    QuadratureOptions opt;
    opt.abs_tol = 1e-12;
    const double smoothed = integrate_gk15_real(
        [&c](double u) {
          return 0.5 * oracle::j0_series(u * c.d) * (c.T / std::sqrt(std::numbers::pi)) *
                 std::exp(-c.T * c.T * (c.nu - u) * (c.nu - u));
        },
        lo, hi, opt);
    CAPTURE(c.nu);
    CAPTURE(c.T);
    CHECK(std::abs(rate - smoothed) < 1e-6);
  }
}

TEST_CASE("transition probability is real and nonnegative") {
  // Diagonal probabilities are positive definite; the off-diagonal component
  // is combined with them below threshold of the first J0 zero, where it is
  // itself nonnegative.
  const auto window = SwitchingWindow::gaussian(5.0);
  for (double nu : {-2.0, -1.0, -0.3}) {
    for (double d : {0.0, 0.5, 1.0}) {
      const auto geom = DetectorGeometry::from_separation(d, 1.0);
      const double p_diag =
          transition_probability(nu, window, geom, ResponseKind::diagonal);
      const double p_off =
          transition_probability(nu, window, geom, ResponseKind::offdiagonal);
      CAPTURE(nu);
      CAPTURE(d);
      CHECK(p_diag >= -1e-8);
      CHECK(p_diag + p_off >= -1e-8);   // sum-branch combination
      CHECK(p_diag - p_off >= -1e-8);   // difference-branch combination
      if (std::abs(nu) * d < 2.4) CHECK(p_off >= -1e-8);
    }
  }
}

TEST_CASE("transition probability rejects bad windows") {
  const auto geom = DetectorGeometry::from_separation(1.0, 1.0);
  CHECK_THROWS_AS(transition_probability(-1.0, SwitchingWindow::constant(),
                                         geom, ResponseKind::diagonal),
                  std::invalid_argument);
  CHECK_THROWS_AS(SwitchingWindow::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SwitchingWindow::gaussian(-2.0), std::invalid_argument);
}

TEST_CASE("total transition probability assembles the four components") {
  const auto geom = DetectorGeometry::from_separation(1.0, 1.0);
  const auto window = SwitchingWindow::gaussian(5.0);
  const double p_diag =
      transition_probability(-1.0, window, geom, ResponseKind::diagonal);
  const double p_off =
      transition_probability(-1.0, window, geom, ResponseKind::offdiagonal);
  const double total = total_transition_probability(-1.0, window, geom);
  CHECK(total == doctest::Approx(0.5 * (p_diag + p_off)).epsilon(1e-12));
  // Quadratic in the overall coupling.
  CHECK(total_transition_probability(-1.0, window, geom, 2.0) ==
        doctest::Approx(4.0 * total).epsilon(1e-12));
}
