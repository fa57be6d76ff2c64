#include "udw/analog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace udw {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string("CondensateLaserParams: ") + field +
                                " must be > 0");
  }
}

}  // namespace

void CondensateLaserParams::validate() const {
  require_positive(m, "m");
  require_positive(rho0, "rho0");
  require_positive(omega0, "omega0");
  require_positive(beam_radius, "beam_radius");
  if (!(g2d >= 0.0)) {
    throw std::invalid_argument("CondensateLaserParams: g2d must be >= 0");
  }
}

CondensateLaserParams cs133_preset(double g2d, double alpha_r, double alpha) {
  CondensateLaserParams p;
  p.m = 2.2069469509887499e-25;                    // 132.905451933 u
  p.rho0 = 1e15;                                   // 10^3 um^-2
  p.omega0 = 2.0 * std::numbers::pi * 1e14;        // omega0/(2 pi) = 10^14 Hz
  p.beam_radius = 3e-6;                            // 3 um
  p.g2d = g2d;
  p.alpha_r = alpha_r;
  p.alpha = alpha;
  return p;
}

double sound_speed(const CondensateLaserParams& p) {
  p.validate();
  if (p.g2d == 0.0) {
    throw std::domain_error(
        "sound_speed: degenerate medium (g2d = 0 gives zero sound speed)");
  }
  return std::sqrt(p.g2d * p.rho0 / p.m);
}

double coupling_mu(const CondensateLaserParams& p) {
  p.validate();
  return -std::abs(p.alpha_r) * p.omega0 * std::sqrt(2.0 * p.m * p.rho0) *
         p.alpha;
}

double dimensionless_frequency(double nu, const DetectorGeometry& geom) {
  geom.check();
  return nu * geom.delta / geom.c_s;
}

double frequency_from_dimensionless(double x, const DetectorGeometry& geom) {
  geom.check();
  if (geom.delta == 0.0) {
    throw std::domain_error(
        "frequency_from_dimensionless: delta = 0 has no inverse map");
  }
  return x * geom.c_s / geom.delta;
}

}  // namespace udw
