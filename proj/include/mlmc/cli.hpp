#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlmc/graph_io.hpp"
#include "mlmc/pipeline.hpp"

namespace mlmc::cli {

enum class Command { kSolve, kBench };

struct CliInvocation {
  Command command = Command::kSolve;
  /// Graph file for solve, directory for bench.
  std::filesystem::path input;
  std::optional<GraphFormat> format;
  RunConfig config;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> partition_out;
  std::optional<std::filesystem::path> dump_embedding;
  int verbosity = 1;
};

/// Bad command line. exit_code is 0 for --help, 2 otherwise.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, int exit_code)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// args excludes the program name. Validates the resulting RunConfig.
CliInvocation parse_args(const std::vector<std::string>& args);

/// Flags that reproduce cfg when passed to parse_args.
std::vector<std::string> config_to_args(const RunConfig& cfg);

/// MLMC_THREADS, or 0 (auto) when unset.
unsigned threads_from_env();

/// Entry point. Returns the process exit code: 0 ok, 1 load/solve error,
/// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlmc::cli
