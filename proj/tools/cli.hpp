#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adclin::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kComputeError = 3,
  kIoError = 4,
};

struct CliInvocation {
  std::string subcommand;  ///< design | eval | sweep-branches | sweep-mults | spectrum | gen
  std::filesystem::path config_path;  ///< empty = built-in defaults
  std::filesystem::path output_dir;
  std::vector<std::string> overrides;  ///< dotted.key=value
  std::optional<int> threads;
  std::filesystem::path params_path;  ///< eval
  std::string linearizer = "proposed";  ///< design: proposed | hammerstein
  std::optional<int> branches;  ///< design / spectrum: overrides design.n_branches
  long long signal_index = -1;  ///< gen: -1 = first training signal, else ensemble index
  bool include_timestamp = true;
};

/// Runs one subcommand. Errors are reported as a JSON object on `err` and in
/// `<output_dir>/error.json` when the directory is writable.
int run_cli(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace adclin::cli
