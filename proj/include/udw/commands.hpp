#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "udw/config.hpp"

namespace udw {

enum class OutputFormat { csv, json };

struct CommandOptions {
  OutputFormat format = OutputFormat::csv;
  double tolerance = 1e-3;          // oracle-agreement gate for `response`
  std::optional<std::uint64_t> seed;  // overrides [simulate] seed
};

struct SweepSpec {
  std::string variable;  // delta | mu_sq | band
  std::vector<double> values;
  std::vector<std::pair<double, double>> bands;  // for variable == band
};

// Exit codes: 0 success, 2 config error (thrown as ConfigError),
// 3 oracle or statistical failure (diagnostics on `diag`).
int cmd_response(const RunConfig& cfg, const CommandOptions& opt,
                 std::ostream& out, std::ostream& diag);
int cmd_psd(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
            std::ostream& diag);
int cmd_snr(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
            std::ostream& diag);
int cmd_witness(const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& out, std::ostream& diag);
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt,
                 std::ostream& out, std::ostream& diag);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt,
              const SweepSpec& sweep, std::ostream& out, std::ostream& diag);
int cmd_params(const RunConfig& cfg, const CommandOptions& opt,
               std::ostream& out, std::ostream& diag);

}  // namespace udw
