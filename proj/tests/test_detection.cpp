#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle_helpers.hpp"
#include "udw/detection.hpp"
#include "udw/rng.hpp"

using namespace udw;

namespace {
constexpr double kMuSqSql = 1.6329931618554521;       // 2 sqrt(2/3)
constexpr double kSqlFloorNeg = 0.22474487139158905;  // sqrt(3/2) - 1
constexpr double kSqueezedFloor = 0.19371294336139656;  // (sqrt 10 - 2)/6
constexpr double kJ0At1 = 0.76519768655796655;
}  // namespace

TEST_CASE("added noise at the standard quantum limit") {
  CHECK(added_noise(-1.0, kMuSqSql) ==
        doctest::Approx(kSqlFloorNeg).epsilon(1e-12));
  CHECK(added_noise(1.0, kMuSqSql) ==
        doctest::Approx(2.2247448713915890).epsilon(1e-12));
  CHECK(added_noise(-2.0, 1.0) == 0.375);
  CHECK(added_noise(0.0, 1.0) == doctest::Approx(1.375));  // sgn(0) = 0
  CHECK_THROWS_AS(added_noise(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(added_noise(-1.0, -1.0), std::invalid_argument);
}

TEST_CASE("noise budget decomposition holds term by term") {
  const GaussianStream rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const double nu = 10.0 * (rng.uniform(3 * i) - 0.5);
    const double mu_sq = 0.05 + 10.0 * rng.uniform(3 * i + 1);
    const NoiseBudget budget(mu_sq);
    CAPTURE(nu);
    CAPTURE(mu_sq);
    CHECK(budget.total(nu) ==
          doctest::Approx(budget.imprecision() + budget.backaction() +
                          budget.cross(nu))
              .epsilon(1e-15));
    CHECK(budget.total(nu) == doctest::Approx(added_noise(nu, mu_sq)));
    CHECK(budget.total(nu) > 0.0);
  }
}

TEST_CASE("squeezed floor replaces the nu < 0 budget") {
  NoiseBudget budget(kMuSqSql, squeezed_noise_floor());
  CHECK(budget.total(-0.5) == doctest::Approx(kSqueezedFloor).epsilon(1e-12));
  CHECK(budget.total(0.5) ==
        doctest::Approx(2.2247448713915890).epsilon(1e-12));
}

TEST_CASE("sql_optimize returns the closed-form optimum") {
  const SqlOptimum opt = sql_optimize();
  CHECK(opt.mu_sq == doctest::Approx(kMuSqSql).epsilon(1e-12));
  CHECK(opt.noise_neg == doctest::Approx(kSqlFloorNeg).epsilon(1e-12));
  CHECK(opt.noise_pos == doctest::Approx(1.0 + kSqlFloorNeg + 1.0).epsilon(1e-12));

  // Independent minimizer oracle.
  const double numeric = oracle::ternary_minimize(
      [](long double m) { return 1.0L / m + 3.0L * m / 8.0L; }, 1e-3L, 1e3L);
  CHECK(std::abs(numeric - opt.mu_sq) < 1e-8);

  // Convexity at the optimum by central finite differences.
  const auto f = [](double m) { return 1.0 / m + 3.0 * m / 8.0; };
  const double h = 1e-4;
  const double second =
      (f(opt.mu_sq + h) - 2.0 * f(opt.mu_sq) + f(opt.mu_sq - h)) / (h * h);
  CHECK(second > 0.0);
}

TEST_CASE("squeezed floor constants") {
  CHECK(squeezed_noise_floor() ==
        doctest::Approx(kSqueezedFloor).epsilon(1e-12));
  CHECK(squeezed_improvement_vs_sql() ==
        doctest::Approx(0.13807624546912729).epsilon(1e-10));
  CHECK(squeezed_noise_floor() < kSqlFloorNeg);
}

TEST_CASE("psd on the excitation side is pure noise") {
  const auto geom = DetectorGeometry::from_separation(1.0, 1.0);
  for (double mu_sq : {0.5, 1.0, kMuSqSql}) {
    const double expected =
        0.5 * mu_sq * (1.0 / mu_sq + 3.0 * mu_sq / 8.0 + 1.0);
    CHECK(psd(Branch::sum, 2.0, mu_sq, geom, false) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(psd(Branch::difference, 2.0, mu_sq, geom, false) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK_THROWS_AS(psd(Branch::sum, -1.0, 0.0, geom, false),
                  std::invalid_argument);
}

TEST_CASE("sum minus difference isolates the interference response") {
  const GaussianStream rng(9, 0);
  for (int i = 0; i < 500; ++i) {
    const double nu = -5.0 * rng.uniform(3 * i) - 1e-6;
    const double d = 5.0 * rng.uniform(3 * i + 1);
    const double mu_sq = 0.1 + 5.0 * rng.uniform(3 * i + 2);
    const auto geom = DetectorGeometry::from_separation(d, 1.0);
    const double lhs = psd(Branch::sum, nu, mu_sq, geom, false) -
                       psd(Branch::difference, nu, mu_sq, geom, false);
    CAPTURE(nu);
    CAPTURE(d);
    CHECK(lhs == doctest::Approx(mu_sq * bessel_j0(nu * d)).epsilon(1e-12));
  }
}

TEST_CASE("psd positivity over a parameter scan") {
  const GaussianStream rng(13, 0);
  for (int i = 0; i < 1000; ++i) {
    const double nu = 10.0 * (rng.uniform(3 * i) - 0.5);
    if (nu == 0.0) continue;
    const double mu_sq = 0.05 + 10.0 * rng.uniform(3 * i + 1);
    const double d = 5.0 * rng.uniform(3 * i + 2);
    const auto geom = DetectorGeometry::from_separation(d, 1.0);
    CHECK(psd(Branch::sum, nu, mu_sq, geom, false) > 0.0);
    CHECK(psd(Branch::difference, nu, mu_sq, geom, false) > 0.0);
    CHECK(psd(Branch::sum, nu, mu_sq, geom, true) > 0.0);
    CHECK(psd(Branch::difference, nu, mu_sq, geom, true) > 0.0);
  }
}

TEST_CASE("snr against the squeezed floor") {
  const auto geom = DetectorGeometry::from_separation(1.0, 1.0);
  // nu -> 0-: F -> 2, so SNR -> 2/floor = 2 (sqrt 10 + 2).
  CHECK(snr(-1e-9, geom, true) ==
        doctest::Approx(10.324555320336759).epsilon(1e-9));
  // Band edge nu = -c_s/delta.
  CHECK(snr(-1.0, geom, true) ==
        doctest::Approx(9.1124405830990958).epsilon(1e-12));
  CHECK(snr(-1.0, geom, false) ==
        doctest::Approx((1.0 + kJ0At1) / kSqlFloorNeg).epsilon(1e-12));
  CHECK_THROWS_AS(snr(0.0, geom, true), std::domain_error);
  CHECK_THROWS_AS(snr(1.0, geom, true), std::domain_error);
}

TEST_CASE("snr minimum sits at the band edge") {
  const auto geom = DetectorGeometry::from_separation(1.0, 1.0);
  double min_value = 1e300;
  double min_at = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double nu = -1.0 + i * (0.99 / 99.0);  // [-1, -0.01]
    const double v = snr(nu, geom, true);
    if (v < min_value) {
      min_value = v;
      min_at = nu;
    }
  }
  CHECK(min_at == doctest::Approx(-1.0));
  CHECK(min_value > 9.0);
}

TEST_CASE("witness closed form and null cases") {
  const auto geom = DetectorGeometry::from_separation(1.0, 1.0);
  // Noise cancels identically above threshold, independent of mu^2.
  for (double mu_sq : {0.3, 1.0, 7.0}) {
    CHECK(witness(2.0, mu_sq, geom) == 0.0);
  }
  // delta -> 0 recovers mu^2.
  const auto collocated = DetectorGeometry::from_separation(0.0, 1.0);
  CHECK(witness(-1.0, 2.5, collocated) == doctest::Approx(2.5).epsilon(1e-14));

  // Single-trajectory mode nulls the witness everywhere.
  DetectionModel model;
  model.mu_sq = 2.0;
  model.geometry = geom;
  model.superposed = false;
  for (double nu : {-2.0, -0.5, 0.7, 3.0}) {
    CHECK(model.witness(nu) == 0.0);
  }
  // And with superposition present it equals mu^2 Theta(-nu) J0.
  model.superposed = true;
  for (double nu : {-2.0, -0.5}) {
    CHECK(model.witness(nu) ==
          doctest::Approx(2.0 * bessel_j0(nu)).epsilon(1e-12));
  }
}

TEST_CASE("heterodyne frequency map") {
  CHECK(heterodyne_frequency_map(0.0, 50.0) == 50.0);
  CHECK(heterodyne_frequency_map(50.0, 50.0) == 0.0);
  const GaussianStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    const double nu = 100.0 * (rng.uniform(i) - 0.5);
    // Round trip is exact up to the cancellation ulp of delta_lo - nu.
    const double back =
        heterodyne_frequency_unmap(heterodyne_frequency_map(nu, 75.0), 75.0);
    CHECK(std::abs(back - nu) <= 1e-12 * 75.0);
  }
  CHECK_THROWS_AS(heterodyne_frequency_map(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(heterodyne_frequency_map(1.0, -5.0), std::invalid_argument);
}

TEST_CASE("detection model squeezing applies only below threshold") {
  DetectionModel model;
  model.mu_sq = kMuSqSql;
  model.geometry = DetectorGeometry::from_separation(1.0, 1.0);
  model.squeezed = true;
  CHECK(model.noise(-0.4) == doctest::Approx(kSqueezedFloor).epsilon(1e-12));
  CHECK(model.noise(0.4) ==
        doctest::Approx(2.2247448713915890).epsilon(1e-12));
}
