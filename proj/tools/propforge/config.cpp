#include "propforge/config.hpp"

#include "propforge/common/io.hpp"

namespace propforge::cli {

using nlohmann::json;

json load_config_file(const std::filesystem::path& path) {
  std::string text;
  try {
    const auto bytes = read_file(path);
    text.assign(bytes.begin(), bytes.end());
  } catch (const std::exception& e) {
    throw UsageError("cannot read config " + path.string() + ": " + e.what());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

void merge_config(json& base, const json& overlay, const std::string& context) {
  if (!overlay.is_object()) throw UsageError(context + ": expected an object");
  for (const auto& [key, value] : overlay.items()) {
    const auto it = base.find(key);
    if (it == base.end()) throw UsageError(context + ": unknown key '" + key + "'");
    if (it->is_object() && value.is_object()) {
      merge_config(*it, value, context + "." + key);
    } else {
      *it = value;
    }
  }
}

void apply_set(json& base, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &base;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    json* next = nullptr;
    if (node->is_object()) {
      const auto it = node->find(key);
      if (it != node->end()) next = &*it;
    } else if (node->is_array() && !key.empty() && key.find_first_not_of("0123456789") == std::string::npos) {
      const auto idx = std::stoul(key);
      if (idx < node->size()) next = &(*node)[idx];
    }
    if (next == nullptr) throw UsageError("--set: unknown key '" + path + "'");
    node = next;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object() && !value.is_object()) throw UsageError("--set: '" + path + "' is a section");
  *node = value;
}

json resolve_config(json defaults, const std::string& config_path, const json& flag_overrides,
                    const std::vector<std::string>& sets) {
  if (!config_path.empty()) merge_config(defaults, load_config_file(config_path), config_path);
  if (!flag_overrides.is_null()) merge_config(defaults, flag_overrides, "flags");
  for (const auto& s : sets) apply_set(defaults, s);
  return defaults;
}

void echo_config(const std::filesystem::path& dir, const json& config) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "resolved_config.json", config.dump(2) + "\n");
}

}  // namespace propforge::cli
