#pragma once

// Command-line front end: threshold tables, single simulations, sweeps,
// the reliability experiment and the figure presets.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetkc {

inline constexpr const char* kToolName = "hetkc";
inline constexpr const char* kToolVersion = "0.1.0";

/// Stable exit codes for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitUnsatisfiable = 3,
  kExitIo = 4,
};

/// Malformed or inconsistent configuration. `field()` names the key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Everything a subcommand needs. The JSON config uses these member names as
/// flat keys.
struct RunConfig {
  std::string command;  ///< threshold | simulate | sweep | reliability | figure
  int figure = 0;       ///< 1..4 for `figure`
  std::string name = "run";

  std::int64_t n = 500;
  std::vector<double> mu{0.5, 0.5};
  std::vector<std::int64_t> K;  ///< explicit ring sizes; overrides K1 + offsets
  std::optional<std::int64_t> K1;
  std::vector<std::int64_t> offsets{0, 10};
  std::int64_t P = 10000;
  double alpha = 0.4;

  std::vector<std::size_t> k{2};
  std::string sweep_variable = "K1";  ///< K1 | alpha
  std::vector<double> sweep_values;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::size_t max_deletions = 20;

  std::string out = ".";
  std::size_t workers = 1;
  bool dump_graphs = false;
  bool plot_script = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Serializes every field as one flat JSON object.
std::string config_to_json(const RunConfig& config);

/// Applies the keys present in `json_text` on top of `base`. Unknown keys
/// and type mismatches throw ConfigError.
RunConfig parse_config(std::string_view json_text, RunConfig base = {});

/// Runs the tool with `args` (program name excluded). Never throws; errors
/// go to `err` and map to an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hetkc
