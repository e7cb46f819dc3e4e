#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lightclock::cli {

enum ExitCode : int {
  kSuccess = 0,
  kParameterError = 2,
  kStatisticalFailure = 3,
  kCertificationFailure = 4,
};

enum class OutputFormat { Csv, Json };

/// Defaults read from the flat JSON config file; command-line flags win.
struct RunConfig {
  double c = 1.0;
  int order = 2;
  double identity_tolerance = 1e-12;
  double lifetime_bound = 1e15;
  std::optional<OutputFormat> format;  // per-command default when unset
  std::optional<std::string> out;
  unsigned threads = 0;
};

/// Parses a config document. Unknown keys or out-of-range values throw
/// lightclock::Error with ErrorKind::Config.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string format_number(double x);

}  // namespace lightclock::cli
