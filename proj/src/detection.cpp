#include "udw/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace udw {
namespace {

double sum_noise_terms(double nu, double mu_sq) {
  return 1.0 / mu_sq + 3.0 * mu_sq / 8.0 + signum(nu);
}

// Golden-section minimizer for a unimodal function on [a, b].  Extended
// precision keeps the value-comparison localization floor (~sqrt(eps))
// below the 1e-8 agreement contract.
double golden_section_minimize(long double (*f)(long double), long double a,
                               long double b, long double tol) {
  const long double inv_phi = 0.5L * (std::sqrt(5.0L) - 1.0L);
  long double c = b - inv_phi * (b - a);
  long double d = a + inv_phi * (b - a);
  long double fc = f(c);
  long double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return static_cast<double>(0.5L * (a + b));
}

long double noise_without_sign_term_ext(long double mu_sq) {
  return 1.0L / mu_sq + 3.0L * mu_sq / 8.0L;
}

}  // namespace

NoiseBudget::NoiseBudget(double mu_sq_, std::optional<double> floor)
    : mu_sq(mu_sq_), squeezed_floor(floor) {
  if (!(mu_sq > 0.0)) {
    throw std::invalid_argument("NoiseBudget: mu_sq must be > 0");
  }
}

double NoiseBudget::total(double nu) const {
  if (squeezed_floor && nu < 0.0) return *squeezed_floor;
  return imprecision() + backaction() + cross(nu);
}

double added_noise(double nu, double mu_sq) {
  if (!(mu_sq > 0.0)) {
    throw std::invalid_argument("added_noise: mu_sq must be > 0");
  }
  return sum_noise_terms(nu, mu_sq);
}

SqlOptimum sql_optimize() {
  const double closed = 2.0 * std::sqrt(2.0 / 3.0);
  const double numeric =
      golden_section_minimize(noise_without_sign_term_ext, 1e-3L, 1e3L, 1e-11L);
  if (std::abs(closed - numeric) > 1e-8) {
    throw std::logic_error("sql_optimize: numeric minimum drifted from 2 sqrt(2/3)");
  }
  const double floor = 1.0 / closed + 3.0 * closed / 8.0;  // sqrt(3/2)
  return SqlOptimum{closed, floor - 1.0, floor + 1.0};
}

double squeezed_noise_floor() { return (std::sqrt(10.0) - 2.0) / 6.0; }

double squeezed_improvement_vs_sql() {
  return 1.0 - squeezed_noise_floor() / (std::sqrt(1.5) - 1.0);
}

double psd(Branch branch, double nu, double mu_sq, const DetectorGeometry& geom,
           bool squeezed) {
  if (!(mu_sq > 0.0)) {
    throw std::invalid_argument("psd: mu_sq must be > 0");
  }
  const double d = geom.delta_over_cs();
  const double response =
      (branch == Branch::sum) ? total_response(nu, d) : diff_response(nu, d);
  const double noise = (squeezed && nu < 0.0) ? squeezed_noise_floor()
                                              : sum_noise_terms(nu, mu_sq);
  return 0.5 * mu_sq * (response + noise);
}

double snr(double nu, const DetectorGeometry& geom, bool squeezed) {
  if (!(nu < 0.0)) {
    throw std::domain_error("snr: no de-excitation signal for nu >= 0");
  }
  const double floor =
      squeezed ? squeezed_noise_floor() : (std::sqrt(1.5) - 1.0);
  return total_response(nu, geom.delta_over_cs()) / floor;
}

double witness(double nu, double mu_sq, const DetectorGeometry& geom) {
  return psd(Branch::sum, nu, mu_sq, geom, false) -
         psd(Branch::difference, nu, mu_sq, geom, false);
}

double heterodyne_frequency_map(double nu, double delta_lo) {
  if (!(delta_lo > 0.0)) {
    throw std::invalid_argument("heterodyne_frequency_map: delta_lo must be > 0");
  }
  return delta_lo - nu;
}

double heterodyne_frequency_unmap(double baseband, double delta_lo) {
  if (!(delta_lo > 0.0)) {
    throw std::invalid_argument("heterodyne_frequency_unmap: delta_lo must be > 0");
  }
  return delta_lo - baseband;
}

double DetectionModel::response_total(double nu) const {
  const double d = geometry.delta_over_cs();
  return superposed ? total_response(nu, d) : 2.0 * response_diag(nu);
}

double DetectionModel::response_difference(double nu) const {
  const double d = geometry.delta_over_cs();
  return superposed ? diff_response(nu, d) : 2.0 * response_diag(nu);
}

double DetectionModel::noise(double nu) const {
  if (!(mu_sq > 0.0)) {
    throw std::invalid_argument("DetectionModel: mu_sq must be > 0");
  }
  if (squeezed && nu < 0.0) return squeezed_noise_floor();
  return sum_noise_terms(nu, mu_sq);
}

double DetectionModel::psd(Branch branch, double nu) const {
  const double response = (branch == Branch::sum) ? response_total(nu)
                                                  : response_difference(nu);
  return 0.5 * mu_sq * (response + noise(nu));
}

double DetectionModel::snr(double nu) const {
  if (!(nu < 0.0)) {
    throw std::domain_error("snr: no de-excitation signal for nu >= 0");
  }
  const double floor =
      squeezed ? squeezed_noise_floor() : (std::sqrt(1.5) - 1.0);
  return response_total(nu) / floor;
}

double DetectionModel::witness(double nu) const {
  return psd(Branch::sum, nu) - psd(Branch::difference, nu);
}

}  // namespace udw
