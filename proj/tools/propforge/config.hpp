#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace propforge::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Bad flags, bad config keys or values. Reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_config_file(const std::filesystem::path& path);

/// Recursively copies `overlay` onto `base`. Every overlay key must already
/// exist in `base`; objects merge, everything else is replaced.
void merge_config(nlohmann::json& base, const nlohmann::json& overlay, const std::string& context = "config");

/// Applies "a.b.c=value". value is parsed as JSON when possible, otherwise
/// taken as a string. The path must exist.
void apply_set(nlohmann::json& base, const std::string& assignment);

/// Defaults, then --config, then flag overrides, then --set.
nlohmann::json resolve_config(nlohmann::json defaults, const std::string& config_path,
                              const nlohmann::json& flag_overrides, const std::vector<std::string>& sets);

/// Writes the resolved config as <dir>/resolved_config.json.
void echo_config(const std::filesystem::path& dir, const nlohmann::json& config);

/// Runs `parse`, converting JSON and validation errors into UsageError.
template <typename F>
auto parse_config(F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const UsageError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

}  // namespace propforge::cli
