#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace propforge {

/// Reads an object field by field and rejects keys nobody asked for.
///
///   StrictReader r(j, "generator");
///   cfg.width = r.get<int>("width");
///   r.finish();  // throws if j had keys other than the ones read
class StrictReader {
 public:
  StrictReader(const nlohmann::json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw std::invalid_argument(context_ + ": expected a JSON object");
  }

  template <typename T>
  T get(const std::string& key) {
    return at(key).template get<T>();
  }

  const nlohmann::json& at(const std::string& key) {
    const auto it = j_.find(key);
    if (it == j_.end()) throw std::invalid_argument(context_ + ": missing key '" + key + "'");
    seen_.insert(key);
    return *it;
  }

  std::string child(const std::string& key) const { return context_ + "." + key; }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw std::invalid_argument(context_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const nlohmann::json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

}  // namespace propforge
