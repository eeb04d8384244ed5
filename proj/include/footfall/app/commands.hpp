#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "footfall/error.hpp"
#include "footfall/service/config.hpp"
#include "footfall/service/pipeline.hpp"
#include "footfall/simulate/scenario.hpp"

namespace footfall::app {

// Process exit codes, fixed for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,        // bad flags or configuration
  kExitBadInput = 2,     // malformed input, invalid count or date
  kExitStorage = 3,      // data directory or output file failure
  kExitUnknownDate = 4,  // no record for the requested date
};

int exit_code_for(ErrorCode code);

// Flags shared by the subcommands; unset values fall through to the
// environment, then the config file, then built-in defaults.
struct ConfigOverrides {
  std::optional<std::filesystem::path> config_file;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::string> timezone;
  std::optional<std::string> bind;
  std::optional<bool> strict;
};

service::Config resolve_config(const ConfigOverrides& flags,
                               const service::EnvLookup& env = service::process_env());

/// ingest -> tracker -> analytics -> store over a newline-delimited
/// detection stream, then a summary on `out`. A stream that fails
/// validation stops at the offending line (events already persisted stay).
int cmd_replay(const service::Config& config, std::istream& input, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::uint64_t seed = 0;
  int people = 0;
  std::filesystem::path out;
  simulate::ScenarioParams params;
};
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

int cmd_transactions(const service::Config& config, const std::string& date, const std::string& count,
                     std::ostream& out, std::ostream& err, service::Clock clock = service::system_clock());

/// Writes the CSV to `out_path`, or to `out` when no path is given.
int cmd_export(const service::Config& config, const std::optional<std::filesystem::path>& out_path,
               std::ostream& out, std::ostream& err);

/// Runs the HTTP service until SIGINT/SIGTERM, optionally ingesting `input`
/// ("-" for stdin) on a background thread.
int cmd_serve(const service::Config& config, const std::optional<std::string>& input, std::ostream& out,
              std::ostream& err);

/// Full command line: `footfall <serve|replay|simulate|transactions|export> [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace footfall::app
