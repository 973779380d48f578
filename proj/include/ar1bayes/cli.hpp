#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <ar1bayes/ar1.hpp>
#include <ar1bayes/experiments.hpp>

namespace ar1bayes::cli {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;   // bad flags or config
inline constexpr int kExitData = 2;    // unreadable or degenerate input
inline constexpr int kExitNumeric = 3; // internal numerical failure

// Thrown for flag/config problems (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for input-data problems (exit 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a delimited observation file (comma or whitespace separated,
// optional header, '#' comments skipped).  column is 1-based; 0 selects
// the last column.  Parse failures report the offending line number.
TimeSeries read_series_file(const std::filesystem::path& path, int column = 0);

// Flat key = value config file with '#' comments.  Unknown keys are
// rejected with their line number.
struct ConfigFile {
  std::vector<std::pair<std::string, std::string>> entries;

  static ConfigFile parse(const std::filesystem::path& path);
  const std::string* find(const std::string& key) const;
};

// Applies a config file on top of defaults; flag overrides are applied by
// the individual commands afterwards.
SimulationConfig load_simulation_config(const std::filesystem::path& path,
                                        const SimulationConfig& defaults);

// Runs the full CLI; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace ar1bayes::cli
