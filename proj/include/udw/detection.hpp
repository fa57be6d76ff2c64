#pragma once

#include <optional>

#include "udw/response.hpp"

namespace udw {

// Additive heterodyne noise terms: measurement imprecision (shot noise),
// backaction-backaction and backaction-imprecision correlations.
struct NoiseBudget {
  double mu_sq = 1.0;
  std::optional<double> squeezed_floor;  // replaces total() for nu < 0

  explicit NoiseBudget(double mu_sq, std::optional<double> floor = {});

  double imprecision() const { return 1.0 / mu_sq; }
  double backaction() const { return 3.0 * mu_sq / 8.0; }
  double cross(double nu) const { return signum(nu); }
  double total(double nu) const;
};

// N(nu; mu^2) = 1/mu^2 + 3 mu^2/8 + sgn(nu), with sgn(0) = 0.
double added_noise(double nu, double mu_sq);

struct SqlOptimum {
  double mu_sq;      // 2 sqrt(2/3)
  double noise_neg;  // sqrt(3/2) - 1
  double noise_pos;  // sqrt(3/2) + 1
};

// Minimizes the added noise over mu^2 both in closed form and by
// golden-section search; the two must agree to 1e-8.
SqlOptimum sql_optimize();

// nu < 0 noise floor under the ~3 dB squeezing scenario: (sqrt(10) - 2)/6.
double squeezed_noise_floor();
// Fractional improvement of the squeezed floor over the SQL floor (~13.8%).
double squeezed_improvement_vs_sql();

enum class Branch { sum, difference };

// Heterodyne power spectral density (mu^2/2)(F_branch(nu) + N(nu; mu^2)).
// With squeezed = true the nu < 0 noise is replaced by the squeezed floor;
// nu > 0 stays at the unsqueezed value.
double psd(Branch branch, double nu, double mu_sq, const DetectorGeometry& geom,
           bool squeezed);

// F(nu)/N floor on the de-excitation branch.  Rejects nu >= 0.
double snr(double nu, const DetectorGeometry& geom, bool squeezed);

// Sum-branch PSD minus difference-branch PSD; the noise cancels identically,
// leaving mu^2 Theta(-nu) J0(nu delta/c_s).
double witness(double nu, double mu_sq, const DetectorGeometry& geom);

// Baseband analysis frequency Delta_LO - nu and its inverse.
double heterodyne_frequency_map(double nu, double delta_lo);
double heterodyne_frequency_unmap(double baseband, double delta_lo);

// Detection model binding the response functions to one noise budget.
// superposed = false zeroes the off-diagonal response in every consumer
// (single-trajectory mode, the witness null hypothesis).
struct DetectionModel {
  double mu_sq = 1.0;
  DetectorGeometry geometry = DetectorGeometry::from_separation(1.0, 1.0);
  double delta_lo = 100.0;
  bool squeezed = false;
  bool superposed = true;

  double response_total(double nu) const;
  double response_difference(double nu) const;
  double noise(double nu) const;
  double psd(Branch branch, double nu) const;
  double snr(double nu) const;
  double witness(double nu) const;
};

}  // namespace udw
