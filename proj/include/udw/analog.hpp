#pragma once

#include "udw/response.hpp"

namespace udw {

// Physical condensate and probe-laser parameters.  Everything here is SI
// except alpha (dimensionless) and alpha_r, which enters the coupling
// formula in natural units; see README for the unit conventions.
struct CondensateLaserParams {
  double m = 0.0;            // atomic mass [kg]
  double rho0 = 0.0;         // 2-d number density [m^-2]
  double g2d = 0.0;          // s-wave scattering strength [J m^2]
  double omega0 = 0.0;       // laser angular frequency [rad/s]
  double alpha_r = 0.0;      // |Re polarizability| (natural units)
  double alpha = 0.0;        // coherent modulation amplitude
  double beam_radius = 0.0;  // r_0 [m]

  void validate() const;  // throws std::invalid_argument naming the field
};

// Cs-133 feasibility preset: pins m, rho0, omega0 and beam_radius.  The
// scattering strength, polarizability and modulation amplitude have no
// published values for this setup and must be supplied by the caller.
CondensateLaserParams cs133_preset(double g2d, double alpha_r, double alpha);

// Phonon propagation speed c_s = sqrt(g2d rho0 / m) [m/s].  Rejects
// g2d = 0: a degenerate medium has no sound cone and nu*delta/c_s blows up.
double sound_speed(const CondensateLaserParams& p);

// Effective optomechanical coupling mu = -|alpha_R| omega0 sqrt(2 m rho0) alpha.
// Downstream noise formulas depend on mu^2 only.
double coupling_mu(const CondensateLaserParams& p);

// Unit bridge between the lab frequency nu and the dimensionless spectral
// argument x = nu * delta / c_s.
double dimensionless_frequency(double nu, const DetectorGeometry& geom);
double frequency_from_dimensionless(double x, const DetectorGeometry& geom);

}  // namespace udw
