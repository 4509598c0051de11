#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roughchange::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidArguments = 2,
    kIoFailure = 3,
    kDimensionMismatch = 4,
};

/// Named thresholds for the scenarios the method was demonstrated on.
struct ThresholdPreset {
    std::string_view name;
    double threshold;
    std::string_view description;
};

const std::vector<ThresholdPreset>& threshold_presets();
std::optional<double> preset_threshold(std::string_view name);

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Throws InvalidArgument on a line without '='.
std::map<std::string, std::string> parse_config(std::string_view text);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roughchange::cli
