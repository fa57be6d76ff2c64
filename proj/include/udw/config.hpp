#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "udw/analog.hpp"
#include "udw/detection.hpp"

namespace udw {

// Any malformed, unknown or missing configuration maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhysicalConfig {
  std::optional<std::string> preset;  // "cs133"
  std::optional<double> m, rho0, g2d, omega0, alpha_r, alpha, beam_radius;
  // Bookkeeping fields for the probe-field prefactor; accepted and carried
  // through but never used in a computed result (see README).
  std::optional<double> beam_area, permittivity;

  bool operator==(const PhysicalConfig&) const = default;
};

struct GeometryConfig {
  std::optional<std::array<double, 2>> x1, x2;
  std::optional<double> delta;
  double cs = 1.0;

  bool operator==(const GeometryConfig&) const = default;
};

enum class MuMode { value, sql, squeezed };

struct DetectionConfig {
  MuMode mu_mode = MuMode::sql;
  double mu_sq_value = 1.0;  // used when mu_mode == value
  double delta_lo = 100.0;
  double nu_min = -5.0;
  double nu_max = -0.05;
  int grid = 100;
  bool superposed = true;

  bool operator==(const DetectionConfig&) const = default;
};

struct SimulateConfig {
  std::uint64_t seed = 42;
  std::size_t n_samples = std::size_t{1} << 20;
  double sample_rate = 4.0;
  // Record length in units of one (non-overlapping) Welch segment; the 50%
  // overlap roughly doubles the number of averaged segments.
  std::size_t segments = 256;
  std::string branch = "sum";  // sum | difference | witness

  bool operator==(const SimulateConfig&) const = default;
};

struct RunConfig {
  PhysicalConfig physical;
  GeometryConfig geometry;
  DetectionConfig detection;
  SimulateConfig simulate;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& c);

// FNV-1a of the canonical serialization; stamped into every output table.
std::uint64_t config_hash(const RunConfig& c);

double resolved_mu_sq(const DetectionConfig& d);
bool resolved_squeezed(const DetectionConfig& d);
DetectorGeometry resolved_geometry(const GeometryConfig& g);
DetectionModel build_detection_model(const RunConfig& c);

// Applies the preset and checks that every required physical constant is
// present; errors name the missing or conflicting field.
CondensateLaserParams resolved_physical(const PhysicalConfig& p);

// Frequency grid [nu_min, nu_max] with `grid` points.  Grid points are never
// allowed to land exactly on nu = 0, where the step conventions live.
std::vector<double> frequency_grid(const DetectionConfig& d);

}  // namespace udw
