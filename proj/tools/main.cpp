#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "udw/commands.hpp"
#include "udw/version.hpp"

namespace {

double strict_stod(const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) {
    throw udw::ConfigError("sweep: not a number: '" + text + "'");
  }
  return v;
}

udw::SweepSpec parse_sweep_values(const std::string& variable,
                                  const std::string& values) {
  udw::SweepSpec spec;
  spec.variable = variable;
  std::stringstream ss(values);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (variable == "band") {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw udw::ConfigError("sweep band values must look like numin:numax");
      }
      spec.bands.emplace_back(strict_stod(item.substr(0, colon)),
                              strict_stod(item.substr(colon + 1)));
    } else {
      spec.values.push_back(strict_stod(item));
    }
  }
  return spec;
}

int dispatch(const std::string& command, const udw::RunConfig& cfg,
             const udw::CommandOptions& opt, const udw::SweepSpec* sweep,
             std::ostream& out) {
  if (command == "response") return udw::cmd_response(cfg, opt, out, std::cerr);
  if (command == "psd") return udw::cmd_psd(cfg, opt, out, std::cerr);
  if (command == "snr") return udw::cmd_snr(cfg, opt, out, std::cerr);
  if (command == "witness") return udw::cmd_witness(cfg, opt, out, std::cerr);
  if (command == "simulate") return udw::cmd_simulate(cfg, opt, out, std::cerr);
  if (command == "sweep") return udw::cmd_sweep(cfg, opt, *sweep, out, std::cerr);
  if (command == "params") return udw::cmd_params(cfg, opt, out, std::cerr);
  throw udw::ConfigError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("udw-cli ") + udw::kVersion +
               " - superposed-detector response and heterodyne spectra"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  double tolerance = 1e-3;
  std::uint64_t seed = 0;
  bool seed_given = false;

  app.add_option("--config", config_path, "Config file (ini-style sections)");
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--format", format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tolerance", tolerance,
                 "Oracle agreement tolerance for `response`");
  app.add_option("--seed", seed, "Seed override for `simulate`")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  std::string sweep_variable;
  std::string sweep_values;
  for (const char* name :
       {"response", "psd", "snr", "witness", "simulate", "params"}) {
    app.add_subcommand(name)->fallthrough();
  }
  auto* sweep_cmd = app.add_subcommand("sweep");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--variable", sweep_variable, "delta|mu_sq|band")
      ->required();
  sweep_cmd->add_option("--values", sweep_values,
                        "Comma-separated values (band: numin:numax pairs)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    udw::RunConfig cfg;
    if (!config_path.empty()) cfg = udw::load_config_file(config_path);

    udw::CommandOptions opt;
    opt.format = (format == "json") ? udw::OutputFormat::json
                                    : udw::OutputFormat::csv;
    opt.tolerance = tolerance;
    if (seed_given) opt.seed = seed;

    udw::SweepSpec sweep;
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "sweep") {
      sweep = parse_sweep_values(sweep_variable, sweep_values);
    }

    std::ostringstream buffer;
    const int rc = dispatch(command, cfg, opt, &sweep, buffer);
    if (out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw udw::ConfigError("cannot open output file '" + out_path + "'");
      file << buffer.str();
    }
    return rc;
  } catch (const udw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
