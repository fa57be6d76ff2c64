#include "udw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace udw {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": not a number: '" + value +
                      "'");
  }
}

std::uint64_t parse_u64(const std::string& section, const std::string& key,
                        const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("[" + section + "] " + key +
                      ": not a non-negative integer: '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true|false, got '" +
                    value + "'");
}

std::array<double, 2> parse_vec2(const std::string& section,
                                 const std::string& key,
                                 const std::string& value) {
  std::string v = value;
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream ss(v);
  std::array<double, 2> out{};
  std::string rest;
  if (!(ss >> out[0] >> out[1]) || (ss >> rest)) {
    throw ConfigError("[" + section + "] " + key +
                      ": expected two numbers, got '" + value + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Assigner {
  RunConfig* cfg;
  std::string section;
  std::string key;
  std::string value;

  void apply() const {
    if (section == "physical") {
      apply_physical();
    } else if (section == "geometry") {
      apply_geometry();
    } else if (section == "detection") {
      apply_detection();
    } else if (section == "simulate") {
      apply_simulate();
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }

  [[noreturn]] void unknown() const {
    throw ConfigError("[" + section + "] unknown key '" + key + "'");
  }

  double num() const { return parse_double(section, key, value); }

  void apply_physical() const {
    PhysicalConfig& p = cfg->physical;
    if (key == "preset") {
      if (value != "cs133") {
        throw ConfigError("[physical] unknown preset '" + value + "'");
      }
      p.preset = value;
    } else if (key == "m") {
      p.m = num();
    } else if (key == "rho0") {
      p.rho0 = num();
    } else if (key == "g2d") {
      p.g2d = num();
    } else if (key == "omega0") {
      p.omega0 = num();
    } else if (key == "alpha_r") {
      p.alpha_r = num();
    } else if (key == "alpha") {
      p.alpha = num();
    } else if (key == "beam_radius") {
      p.beam_radius = num();
    } else if (key == "beam_area") {
      p.beam_area = num();
    } else if (key == "permittivity") {
      p.permittivity = num();
    } else {
      unknown();
    }
  }

  void apply_geometry() const {
    GeometryConfig& g = cfg->geometry;
    if (key == "x1") {
      g.x1 = parse_vec2(section, key, value);
    } else if (key == "x2") {
      g.x2 = parse_vec2(section, key, value);
    } else if (key == "delta") {
      g.delta = num();
    } else if (key == "cs") {
      g.cs = num();
    } else {
      unknown();
    }
  }

  void apply_detection() const {
    DetectionConfig& d = cfg->detection;
    if (key == "mu_sq") {
      if (value == "sql") {
        d.mu_mode = MuMode::sql;
      } else if (value == "squeezed") {
        d.mu_mode = MuMode::squeezed;
      } else {
        d.mu_mode = MuMode::value;
        d.mu_sq_value = num();
      }
    } else if (key == "delta_lo") {
      d.delta_lo = num();
    } else if (key == "nu_min") {
      d.nu_min = num();
    } else if (key == "nu_max") {
      d.nu_max = num();
    } else if (key == "grid") {
      d.grid = static_cast<int>(parse_u64(section, key, value));
    } else if (key == "superposed") {
      d.superposed = parse_bool(section, key, value);
    } else {
      unknown();
    }
  }

  void apply_simulate() const {
    SimulateConfig& s = cfg->simulate;
    if (key == "seed") {
      s.seed = parse_u64(section, key, value);
    } else if (key == "n_samples") {
      s.n_samples = parse_u64(section, key, value);
    } else if (key == "sample_rate") {
      s.sample_rate = num();
    } else if (key == "segments") {
      s.segments = parse_u64(section, key, value);
    } else if (key == "branch") {
      if (value != "sum" && value != "difference" && value != "witness") {
        throw ConfigError("[simulate] branch: expected sum|difference|witness");
      }
      s.branch = value;
    } else {
      unknown();
    }
  }
};

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::string section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header '" + t + "'");
      }
      section = trim(t.substr(1, t.size() - 2));
      if (section != "physical" && section != "geometry" &&
          section != "detection" && section != "simulate") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": key outside of any section");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    }
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError("[" + section + "] duplicate key '" + key + "'");
    }
    Assigner{&cfg, section, key, value}.apply();
  }
  if (cfg.geometry.x1.has_value() != cfg.geometry.x2.has_value()) {
    throw ConfigError("[geometry] x1 and x2 must be given together");
  }
  if (cfg.geometry.x1 && cfg.geometry.delta) {
    throw ConfigError("[geometry] give either x1/x2 or delta, not both");
  }
  return cfg;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_config(ss);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[physical]\n";
  const PhysicalConfig& p = c.physical;
  if (p.preset) out << "preset = " << *p.preset << "\n";
  const auto emit = [&out](const char* key, const std::optional<double>& v) {
    if (v) out << key << " = " << format_double(*v) << "\n";
  };
  emit("m", p.m);
  emit("rho0", p.rho0);
  emit("g2d", p.g2d);
  emit("omega0", p.omega0);
  emit("alpha_r", p.alpha_r);
  emit("alpha", p.alpha);
  emit("beam_radius", p.beam_radius);
  emit("beam_area", p.beam_area);
  emit("permittivity", p.permittivity);

  out << "[geometry]\n";
  const GeometryConfig& g = c.geometry;
  if (g.x1 && g.x2) {
    out << "x1 = " << format_double((*g.x1)[0]) << ", "
        << format_double((*g.x1)[1]) << "\n";
    out << "x2 = " << format_double((*g.x2)[0]) << ", "
        << format_double((*g.x2)[1]) << "\n";
  }
  if (g.delta) out << "delta = " << format_double(*g.delta) << "\n";
  out << "cs = " << format_double(g.cs) << "\n";

  out << "[detection]\n";
  const DetectionConfig& d = c.detection;
  switch (d.mu_mode) {
    case MuMode::sql:
      out << "mu_sq = sql\n";
      break;
    case MuMode::squeezed:
      out << "mu_sq = squeezed\n";
      break;
    case MuMode::value:
      out << "mu_sq = " << format_double(d.mu_sq_value) << "\n";
      break;
  }
  out << "delta_lo = " << format_double(d.delta_lo) << "\n";
  out << "nu_min = " << format_double(d.nu_min) << "\n";
  out << "nu_max = " << format_double(d.nu_max) << "\n";
  out << "grid = " << d.grid << "\n";
  out << "superposed = " << (d.superposed ? "true" : "false") << "\n";

  out << "[simulate]\n";
  const SimulateConfig& s = c.simulate;
  out << "seed = " << s.seed << "\n";
  out << "n_samples = " << s.n_samples << "\n";
  out << "sample_rate = " << format_double(s.sample_rate) << "\n";
  out << "segments = " << s.segments << "\n";
  out << "branch = " << s.branch << "\n";
  return out.str();
}

std::uint64_t config_hash(const RunConfig& c) {
  const std::string text = serialize_config(c);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

double resolved_mu_sq(const DetectionConfig& d) {
  switch (d.mu_mode) {
    case MuMode::value:
      if (!(d.mu_sq_value > 0.0)) {
        throw ConfigError("[detection] mu_sq must be > 0");
      }
      return d.mu_sq_value;
    case MuMode::sql:
    case MuMode::squeezed:
      return 2.0 * std::sqrt(2.0 / 3.0);
  }
  throw ConfigError("[detection] invalid mu mode");
}

bool resolved_squeezed(const DetectionConfig& d) {
  return d.mu_mode == MuMode::squeezed;
}

DetectorGeometry resolved_geometry(const GeometryConfig& g) {
  if (!(g.cs > 0.0)) throw ConfigError("[geometry] cs must be > 0");
  try {
    if (g.x1 && g.x2) {
      return DetectorGeometry::from_positions(*g.x1, *g.x2, g.cs);
    }
    return DetectorGeometry::from_separation(g.delta.value_or(1.0), g.cs);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[geometry] ") + e.what());
  }
}

DetectionModel build_detection_model(const RunConfig& c) {
  DetectionModel model;
  model.mu_sq = resolved_mu_sq(c.detection);
  model.geometry = resolved_geometry(c.geometry);
  model.delta_lo = c.detection.delta_lo;
  model.squeezed = resolved_squeezed(c.detection);
  model.superposed = c.detection.superposed;
  if (!(model.delta_lo > 0.0)) {
    throw ConfigError("[detection] delta_lo must be > 0");
  }
  return model;
}

CondensateLaserParams resolved_physical(const PhysicalConfig& p) {
  CondensateLaserParams out;
  if (p.preset) {
    // cs133 is the only preset; it pins m, rho0, omega0 and beam_radius.
    const auto conflict = [&](const char* name,
                              const std::optional<double>& v) {
      if (v) {
        throw ConfigError(std::string("[physical] ") + name +
                          " conflicts with preset cs133");
      }
    };
    conflict("m", p.m);
    conflict("rho0", p.rho0);
    conflict("omega0", p.omega0);
    conflict("beam_radius", p.beam_radius);
    out = cs133_preset(0.0, 0.0, 0.0);
  } else {
    const auto required = [](const char* name, const std::optional<double>& v) {
      if (!v) {
        throw ConfigError(std::string("[physical] missing required field '") +
                          name + "'");
      }
      return *v;
    };
    out.m = required("m", p.m);
    out.rho0 = required("rho0", p.rho0);
    out.omega0 = required("omega0", p.omega0);
    out.beam_radius = required("beam_radius", p.beam_radius);
  }
  const auto required_always = [](const char* name,
                                  const std::optional<double>& v) {
    if (!v) {
      throw ConfigError(std::string("[physical] missing required field '") +
                        name + "' (no published value; must be supplied)");
    }
    return *v;
  };
  out.g2d = required_always("g2d", p.g2d);
  out.alpha_r = required_always("alpha_r", p.alpha_r);
  out.alpha = required_always("alpha", p.alpha);
  try {
    out.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[physical] ") + e.what());
  }
  return out;
}

std::vector<double> frequency_grid(const DetectionConfig& d) {
  if (!(d.nu_min < d.nu_max)) {
    throw ConfigError("[detection] need nu_min < nu_max");
  }
  if (d.grid < 1) throw ConfigError("[detection] grid must be >= 1");
  std::vector<double> nu(static_cast<std::size_t>(d.grid));
  if (d.grid == 1) {
    nu[0] = d.nu_min;
  } else {
    const double step = (d.nu_max - d.nu_min) / (d.grid - 1);
    for (int i = 0; i < d.grid; ++i) nu[static_cast<std::size_t>(i)] = d.nu_min + step * i;
  }
  for (double v : nu) {
    if (std::abs(v) < 1e-12) {
      throw ConfigError(
          "[detection] frequency grid contains nu = 0; adjust the band or the "
          "grid size (the step conventions at nu = 0 must not leak into "
          "outputs)");
    }
  }
  return nu;
}

}  // namespace udw
