#ifndef MTLAB_TOOLS_CLI_HPP
#define MTLAB_TOOLS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtlab/optimize.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab::cli {

inline constexpr const char* kToolName = "mtlab";
inline constexpr const char* kToolVersion = "1.0.0";

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string subcommand;
  int N = 2;
  double s = 0.0;
  double t = 0.0;
  std::optional<double> q;      // defaults to N + 1 where a power is needed
  std::optional<double> alpha;  // alpha_crit for sharpness, alpha_crit / 2 elsewhere
  double beta = 0.0;
  double a = 2.0;
  double b = 2.0;
  std::string kind = "G";
  int k_min = 2;
  int k_max = 12;
  int count = 20;
  QuadratureOptions quad;
  OptimizerParams opt;
  std::string output;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
  // Keys given on the command line or in the config file.
  std::set<std::string> explicit_keys;
};

// --help or --version was requested; what() holds the text to print.
struct InfoRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flags override --config FILE entries, which override defaults.
/// Throws Error(Parse) for unknown flags or keys, bad values and conflicting subcommands.
RunConfig parse_args(const std::vector<std::string>& argv);

/// Applies one key=value pair; the key is the flag name without dashes.
void set_key(RunConfig& config, const std::string& key, const std::string& value);

/// Every configuration key with its current value, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& config);

enum ExitCode : int { ok = 0, validation = 1, acceptance_failure = 2, nonconvergence = 3 };

/// Dispatches the subcommand; output goes to config.output or `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mtlab::cli

#endif  // MTLAB_TOOLS_CLI_HPP
