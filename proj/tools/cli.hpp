#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "boostray/params.hpp"
#include "boostray/split_plan.hpp"
#include "report.hpp"

namespace boostray::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitConfig = 3,
};

enum class Mode { Train, Predict, Cv, Holdout, Inspect };

/// Resolved settings for one invocation: defaults, then the optional
/// key=value config file, then command-line flags.
struct RunConfig {
  Mode mode = Mode::Train;
  std::filesystem::path data;
  std::filesystem::path model;
  std::filesystem::path out;
  std::filesystem::path models_dir;
  std::string objective = "auto";
  HyperParams params;
  std::size_t folds = 5;
  double test_fraction = 0.2;
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 0;  // 0 = all hardware threads
  ReportFormat format = ReportFormat::Text;
  std::optional<std::string> positive;
};

/// Applies `key=value` lines (blank lines and `#` comments ignored) to cfg.
/// Keys are flag names without the leading dashes.
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);

int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_predict(const RunConfig& cfg, std::ostream& out);
int cmd_cv(const RunConfig& cfg, std::ostream& out);
int cmd_holdout(const RunConfig& cfg, std::ostream& out);
int cmd_inspect(const RunConfig& cfg, std::ostream& out);

/// Parses arguments and runs one subcommand. Errors are reported on `err`
/// as a single `error: ...` line and mapped to an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boostray::cli
