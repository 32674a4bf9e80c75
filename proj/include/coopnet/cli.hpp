#pragma once

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopnet/experiments.hpp"

namespace coopnet {

inline constexpr const char* kVersion = "0.1.0";
/// Environment variable overriding the default output directory.
inline constexpr const char* kOutputDirEnv = "COOPNET_OUTPUT_DIR";

/// Invalid or unknown configuration key; exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  Protocol protocol = Protocol::StaticMutation;
  ExperimentSpec spec;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> dump_graph;
  bool dry_run = false;
  /// Every key with its resolved textual value, echoed into the manifest.
  std::map<std::string, std::string> resolved;
};

/// Subcommand name for a protocol and back. Throws ConfigError for unknown
/// names.
Protocol parse_protocol(const std::string& name);

/// Known configuration keys, in the order they appear in the manifest.
const std::vector<std::string>& config_keys();

/// Reads flat `key=value` text. Blank lines and lines starting with '#' are
/// ignored. Unknown keys throw ConfigError.
std::map<std::string, std::string> read_config_file(std::istream& in);

/// Merges defaults, config-file values and flag overrides (in that order of
/// precedence, lowest first) into a validated RunConfig. Throws ConfigError.
RunConfig resolve_config(Protocol protocol, const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& flag_values);

/// Full command line entry point. Returns the process exit code: 0 success,
/// 1 runtime failure, 2 invalid configuration.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel = nullptr);

/// Runs the protocol and writes `<protocol>.csv` plus `<protocol>.manifest.json`
/// under config.out_dir. Returns the exit code.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// CSV writers; doubles use the shortest round-trip representation.
void write_sweep_csv(std::ostream& out, const SweepTable& table);
void write_fixation_csv(std::ostream& out, const std::vector<FixationRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);
void write_profile_csv(std::ostream& out, const DegreeProfile& profile);

}  // namespace coopnet
