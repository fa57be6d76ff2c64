#include "udw/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "udw/stochastic.hpp"
#include "udw/table.hpp"

namespace udw {
namespace {

constexpr int kContourNodes = 512;

void emit(std::ostream& out, OutputFormat format, const TableMeta& meta,
          const Table& table) {
  if (format == OutputFormat::csv) {
    write_csv(out, meta, table);
  } else {
    write_json(out, meta, table);
  }
}

TableMeta base_meta(const RunConfig& cfg, const std::string& command) {
  TableMeta meta;
  meta.command = command;
  meta.config_hash = config_hash(cfg);
  return meta;
}

void append_model_meta(TableMeta& meta, const DetectionModel& model) {
  meta.extra.emplace_back("mu_sq", format_double(model.mu_sq));
  meta.extra.emplace_back("delta_over_cs",
                          format_double(model.geometry.delta_over_cs()));
  meta.extra.emplace_back("delta_lo", format_double(model.delta_lo));
  meta.extra.emplace_back("squeezed", model.squeezed ? "true" : "false");
  meta.extra.emplace_back("superposed", model.superposed ? "true" : "false");
  if (model.squeezed) {
    meta.extra.emplace_back("noise_floor_neg",
                            format_double(squeezed_noise_floor()));
  }
}

// Shared spectrum-record table for psd/snr/witness: one row per grid
// frequency; SNR is null exactly when nu >= 0.
Table spectrum_table(const DetectionModel& model,
                     const std::vector<double>& grid) {
  Table t;
  t.columns = {"nu",    "x",     "F_total", "F_diff", "N",
               "S_sum", "S_diff", "witness", "SNR"};
  for (double nu : grid) {
    const double x = nu * model.geometry.delta_over_cs();
    std::optional<double> snr_cell;
    if (nu < 0.0) snr_cell = model.snr(nu);
    t.add_row({nu, x, model.response_total(nu), model.response_difference(nu),
               model.noise(nu), model.psd(Branch::sum, nu),
               model.psd(Branch::difference, nu), model.witness(nu), snr_cell});
  }
  return t;
}

struct BandSummary {
  double min_snr = 0.0;
  double min_snr_at = 0.0;
  double witness_peak = 0.0;
  double witness_peak_at = 0.0;
  std::optional<double> snr_crosses_10_at;
};

BandSummary summarize_band(const DetectionModel& model,
                           const std::vector<double>& grid) {
  BandSummary s;
  bool have_snr = false;
  bool have_witness = false;
  for (double nu : grid) {
    if (nu < 0.0) {
      const double v = model.snr(nu);
      if (!have_snr || v < s.min_snr) {
        s.min_snr = v;
        s.min_snr_at = nu;
        have_snr = true;
      }
    }
    const double w = model.witness(nu);
    if (!have_witness || w > s.witness_peak) {
      s.witness_peak = w;
      s.witness_peak_at = nu;
      have_witness = true;
    }
  }
  if (!have_snr) {
    throw ConfigError("[detection] band does not intersect nu < 0");
  }
  // Locate the SNR = 10 crossing by bisection between adjacent grid points.
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < 0.0) || !(grid[i + 1] < 0.0)) continue;
    const double a = model.snr(grid[i]);
    const double b = model.snr(grid[i + 1]);
    if ((a - 10.0) * (b - 10.0) <= 0.0 && a != b) {
      double lo = grid[i], hi = grid[i + 1];
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((model.snr(mid) - 10.0) * (model.snr(lo) - 10.0) <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      s.snr_crosses_10_at = 0.5 * (lo + hi);
      break;
    }
  }
  return s;
}

std::size_t resolved_segment_len(const SimulateConfig& s) {
  if (s.segments == 0 || s.n_samples % s.segments != 0) {
    throw ConfigError(
        "[simulate] segments must divide n_samples (both powers of two)");
  }
  return s.n_samples / s.segments;
}

struct ZSummary {
  double rms_rel_band = 0.0;   // over nu < 0
  double outlier_fraction = 0.0;  // |z| > 3 over all bins
  std::size_t worst_bin = 0;
  double worst_z = 0.0;
};

ZSummary z_summary(const std::vector<double>& freq,
                   const std::vector<double>& estimate,
                   const std::vector<double>& reference,
                   const std::vector<double>& expected,
                   const std::vector<double>& std_error, double sample_rate) {
  ZSummary s;
  double acc = 0.0;
  std::size_t n_band = 0;
  std::size_t n_out = 0;
  // Band statistics stay inside the alias-free interior: bins near the
  // circular +-fs/2 wrap see both band edges through the estimator kernel.
  const double alias_guard = 0.45 * sample_rate;
  for (std::size_t k = 0; k < freq.size(); ++k) {
    const double z = (estimate[k] - expected[k]) / std_error[k];
    if (std::abs(z) > std::abs(s.worst_z)) {
      s.worst_z = z;
      s.worst_bin = k;
    }
    if (std::abs(z) > 3.0) ++n_out;
    if (freq[k] < 0.0 && std::abs(freq[k]) <= alias_guard &&
        reference[k] != 0.0) {
      const double rel = (estimate[k] - reference[k]) / reference[k];
      acc += rel * rel;
      ++n_band;
    }
  }
  s.rms_rel_band = n_band ? std::sqrt(acc / static_cast<double>(n_band)) : 0.0;
  s.outlier_fraction =
      freq.empty() ? 0.0 : static_cast<double>(n_out) / static_cast<double>(freq.size());
  return s;
}

int simulate_branch(const RunConfig& cfg, const CommandOptions& opt,
                    Branch branch, std::uint64_t seed, std::ostream& out,
                    std::ostream& diag) {
  const DetectionModel model = build_detection_model(cfg);
  const SimulateConfig& sim = cfg.simulate;
  const std::size_t segment_len = resolved_segment_len(sim);

  const TimeSeries record = synthesize_photocurrent(
      branch, model, sim.n_samples, sim.sample_rate, seed);
  const PsdEstimate est =
      welch_psd(record.samples, sim.sample_rate, segment_len);
  auto target = [&model, branch](double f) { return model.psd(branch, f); };
  const std::vector<double> expected =
      welch_expected_psd(target, sim.n_samples, sim.sample_rate, segment_len);

  std::vector<double> analytic(est.frequency.size());
  for (std::size_t k = 0; k < est.frequency.size(); ++k) {
    analytic[k] = target(est.frequency[k]);
  }
  const ZSummary zs = z_summary(est.frequency, est.value, analytic, expected,
                                est.std_error, sim.sample_rate);

  Table t;
  t.columns = {"nu", "target", "estimate", "std_error", "z"};
  for (std::size_t k = 0; k < est.frequency.size(); ++k) {
    t.add_row({est.frequency[k], analytic[k], est.value[k], est.std_error[k],
               (est.value[k] - expected[k]) / est.std_error[k]});
  }

  TableMeta meta = base_meta(cfg, "simulate");
  meta.seed = seed;
  append_model_meta(meta, model);
  meta.extra.emplace_back("branch",
                          branch == Branch::sum ? "sum" : "difference");
  meta.extra.emplace_back("n_samples", std::to_string(sim.n_samples));
  meta.extra.emplace_back("sample_rate", format_double(sim.sample_rate));
  meta.extra.emplace_back("segment_len", std::to_string(segment_len));
  meta.extra.emplace_back("n_segments", std::to_string(est.n_segments));
  meta.extra.emplace_back("rms_rel_err_band", format_double(zs.rms_rel_band));
  meta.extra.emplace_back("outlier_fraction",
                          format_double(zs.outlier_fraction));
  emit(out, opt.format, meta, t);

  if (zs.outlier_fraction >= 0.01) {
    diag << "simulate: statistical failure: " << zs.outlier_fraction * 100.0
         << "% of bins beyond |z| = 3 (worst z = " << zs.worst_z << " at bin "
         << zs.worst_bin << ", f = " << est.frequency[zs.worst_bin] << ")\n";
    return 3;
  }
  return 0;
}

int simulate_witness(const RunConfig& cfg, const CommandOptions& opt,
                     std::uint64_t seed, std::ostream& out,
                     std::ostream& diag) {
  const DetectionModel model = build_detection_model(cfg);
  const SimulateConfig& sim = cfg.simulate;
  const std::size_t segment_len = resolved_segment_len(sim);

  const WitnessEstimate est = monte_carlo_witness(
      model, sim.n_samples, sim.sample_rate, segment_len, seed);

  Table t;
  t.columns = {"nu", "analytic", "estimate", "std_error", "z"};
  std::size_t n_out = 0;
  double worst_z = 0.0;
  double worst_at = 0.0;
  for (std::size_t k = 0; k < est.frequency.size(); ++k) {
    const double z = (est.value[k] - est.expected[k]) / est.std_error[k];
    if (std::abs(z) > 3.0) ++n_out;
    if (std::abs(z) > std::abs(worst_z)) {
      worst_z = z;
      worst_at = est.frequency[k];
    }
    t.add_row({est.frequency[k], est.analytic[k], est.value[k],
               est.std_error[k], z});
  }
  const double outlier_fraction =
      static_cast<double>(n_out) / static_cast<double>(est.frequency.size());

  TableMeta meta = base_meta(cfg, "simulate");
  meta.seed = seed;
  append_model_meta(meta, model);
  meta.extra.emplace_back("branch", "witness");
  meta.extra.emplace_back("n_samples", std::to_string(sim.n_samples));
  meta.extra.emplace_back("sample_rate", format_double(sim.sample_rate));
  meta.extra.emplace_back("segment_len", std::to_string(segment_len));
  meta.extra.emplace_back("n_segments", std::to_string(est.n_segments));
  meta.extra.emplace_back("outlier_fraction", format_double(outlier_fraction));
  emit(out, opt.format, meta, t);

  if (outlier_fraction >= 0.01) {
    diag << "simulate: witness statistical failure: "
         << outlier_fraction * 100.0 << "% of bins beyond |z| = 3 (worst z = "
         << worst_z << " at f = " << worst_at << ")\n";
    return 3;
  }
  return 0;
}

}  // namespace

int cmd_response(const RunConfig& cfg, const CommandOptions& opt,
                 std::ostream& out, std::ostream& diag) {
  const DetectorGeometry geom = resolved_geometry(cfg.geometry);
  const std::vector<double> grid = frequency_grid(cfg.detection);
  const double d = geom.delta_over_cs();

  Table t;
  t.columns = {"nu",        "x",          "F_total",
               "F_diff",    "F_offdiag",  "F_offdiag_contour",
               "F_offdiag_epsilon"};
  double max_dev = 0.0;
  double max_dev_at = 0.0;
  for (double nu : grid) {
    const double closed = response_offdiag(nu, d);
    const double contour = response_offdiag_numeric_contour(nu, d, kContourNodes);
    const double eps = response_numeric_epsilon_extrapolated(nu, d);
    const double dev = std::max({std::abs(closed - contour),
                                 std::abs(closed - eps),
                                 std::abs(contour - eps)});
    if (dev > max_dev) {
      max_dev = dev;
      max_dev_at = nu;
    }
    t.add_row({nu, nu * d, total_response(nu, d), diff_response(nu, d), closed,
               contour, eps});
  }

  TableMeta meta = base_meta(cfg, "response");
  meta.extra.emplace_back("delta_over_cs", format_double(d));
  meta.extra.emplace_back("contour_nodes", std::to_string(kContourNodes));
  meta.extra.emplace_back("max_pairwise_dev", format_double(max_dev));
  meta.extra.emplace_back("tolerance", format_double(opt.tolerance));
  emit(out, opt.format, meta, t);

  if (max_dev > opt.tolerance) {
    diag << "response: oracle disagreement " << max_dev << " at nu = "
         << max_dev_at << " exceeds tolerance " << opt.tolerance << "\n";
    return 3;
  }
  return 0;
}

int cmd_psd(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
            std::ostream& /*diag*/) {
  const DetectionModel model = build_detection_model(cfg);
  const std::vector<double> grid = frequency_grid(cfg.detection);
  TableMeta meta = base_meta(cfg, "psd");
  append_model_meta(meta, model);
  emit(out, opt.format, meta, spectrum_table(model, grid));
  return 0;
}

int cmd_snr(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
            std::ostream& /*diag*/) {
  const DetectionModel model = build_detection_model(cfg);
  const std::vector<double> grid = frequency_grid(cfg.detection);
  const BandSummary s = summarize_band(model, grid);

  TableMeta meta = base_meta(cfg, "snr");
  append_model_meta(meta, model);
  meta.extra.emplace_back("band_min_snr", format_double(s.min_snr));
  meta.extra.emplace_back("band_min_at", format_double(s.min_snr_at));
  meta.extra.emplace_back("snr_crosses_10_at",
                          s.snr_crosses_10_at
                              ? format_double(*s.snr_crosses_10_at)
                              : std::string("none"));
  emit(out, opt.format, meta, spectrum_table(model, grid));
  return 0;
}

int cmd_witness(const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& out, std::ostream& /*diag*/) {
  const DetectionModel model = build_detection_model(cfg);
  const std::vector<double> grid = frequency_grid(cfg.detection);

  // The witness is the sum/difference PSD subtraction; its closed form is
  // mu^2 Theta(-nu) J0.  Stamp the largest identity residue into the header.
  double max_residue = 0.0;
  for (double nu : grid) {
    const double direct = model.witness(nu);
    const double closed = model.superposed
                              ? model.mu_sq * theta_neg(nu) *
                                    bessel_j0(nu * model.geometry.delta_over_cs())
                              : 0.0;
    max_residue = std::max(max_residue, std::abs(direct - closed));
  }

  TableMeta meta = base_meta(cfg, "witness");
  append_model_meta(meta, model);
  meta.extra.emplace_back("max_identity_residue", format_double(max_residue));
  emit(out, opt.format, meta, spectrum_table(model, grid));
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt,
                 std::ostream& out, std::ostream& diag) {
  const std::uint64_t seed = opt.seed.value_or(cfg.simulate.seed);
  const std::string& branch = cfg.simulate.branch;
  if (branch == "sum") {
    return simulate_branch(cfg, opt, Branch::sum, seed, out, diag);
  }
  if (branch == "difference") {
    return simulate_branch(cfg, opt, Branch::difference, seed, out, diag);
  }
  if (branch == "witness") {
    return simulate_witness(cfg, opt, seed, out, diag);
  }
  throw ConfigError("[simulate] branch: expected sum|difference|witness");
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt,
              const SweepSpec& sweep, std::ostream& out,
              std::ostream& /*diag*/) {
  TableMeta meta = base_meta(cfg, "sweep");
  meta.extra.emplace_back("variable", sweep.variable);
  Table t;

  if (sweep.variable == "delta") {
    if (sweep.values.empty()) throw ConfigError("sweep: empty delta range");
    t.columns = {"delta",        "band_min_snr", "band_min_at",
                 "witness_peak", "witness_peak_at"};
    for (double delta : sweep.values) {
      RunConfig point = cfg;
      point.geometry.x1.reset();
      point.geometry.x2.reset();
      point.geometry.delta = delta;
      const DetectionModel model = build_detection_model(point);
      const BandSummary s =
          summarize_band(model, frequency_grid(point.detection));
      t.add_row({delta, s.min_snr, s.min_snr_at, s.witness_peak,
                 s.witness_peak_at});
    }
  } else if (sweep.variable == "mu_sq") {
    if (sweep.values.empty()) throw ConfigError("sweep: empty mu_sq range");
    t.columns = {"mu_sq",        "noise_neg",    "noise_pos",
                 "band_min_snr", "witness_peak", "witness_peak_at"};
    for (double mu_sq : sweep.values) {
      RunConfig point = cfg;
      point.detection.mu_mode = MuMode::value;
      point.detection.mu_sq_value = mu_sq;
      const DetectionModel model = build_detection_model(point);
      const BandSummary s =
          summarize_band(model, frequency_grid(point.detection));
      t.add_row({mu_sq, added_noise(-1.0, mu_sq), added_noise(1.0, mu_sq),
                 s.min_snr, s.witness_peak, s.witness_peak_at});
    }
  } else if (sweep.variable == "band") {
    if (sweep.bands.empty()) throw ConfigError("sweep: empty band range");
    t.columns = {"nu_min",       "nu_max",       "band_min_snr",
                 "band_min_at",  "witness_peak", "witness_peak_at"};
    for (const auto& [nu_min, nu_max] : sweep.bands) {
      RunConfig point = cfg;
      point.detection.nu_min = nu_min;
      point.detection.nu_max = nu_max;
      const DetectionModel model = build_detection_model(point);
      const BandSummary s =
          summarize_band(model, frequency_grid(point.detection));
      t.add_row({nu_min, nu_max, s.min_snr, s.min_snr_at, s.witness_peak,
                 s.witness_peak_at});
    }
  } else {
    throw ConfigError("sweep: variable must be delta|mu_sq|band");
  }

  emit(out, opt.format, meta, t);
  return 0;
}

int cmd_params(const RunConfig& cfg, const CommandOptions& opt,
               std::ostream& out, std::ostream& /*diag*/) {
  const CondensateLaserParams p = resolved_physical(cfg.physical);
  const double cs = sound_speed(p);
  const double mu = coupling_mu(p);

  Table t;
  t.columns = {"c_s", "mu", "mu_sq", "delta", "delta_over_cs"};
  std::optional<double> delta_cell, ratio_cell;
  if (cfg.geometry.delta || cfg.geometry.x1) {
    GeometryConfig g = cfg.geometry;
    g.cs = cs;  // physical sound speed overrides the simulation-unit value
    const DetectorGeometry geom = resolved_geometry(g);
    delta_cell = geom.delta;
    ratio_cell = geom.delta_over_cs();
  }
  t.add_row({cs, mu, mu * mu, delta_cell, ratio_cell});

  TableMeta meta = base_meta(cfg, "params");
  meta.extra.emplace_back("m", format_double(p.m));
  meta.extra.emplace_back("rho0", format_double(p.rho0));
  meta.extra.emplace_back("g2d", format_double(p.g2d));
  meta.extra.emplace_back("omega0", format_double(p.omega0));
  meta.extra.emplace_back("beam_radius", format_double(p.beam_radius));
  emit(out, opt.format, meta, t);
  return 0;
}

}  // namespace udw
