#pragma once

// TOML experiment configs, read into JSON and accessed through typed, checked getters.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "errors.hpp"

namespace chanlab {

namespace detail {

inline nlohmann::json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  const auto& src = node.source().begin;
  throw Error(ErrorCode::config, "unsupported value type (date or time) at line " +
                                     std::to_string(src.line));
}

}  // namespace detail

inline nlohmann::json parse_config_text(const std::string& text, const std::string& source = "config") {
  try {
    return detail::toml_to_json(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw Error(ErrorCode::config, os.str());
  }
}

inline nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::config, "cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str(), path);
}

// Typed view of one config table; every failure is a config error naming the key path.
class ConfigTable {
 public:
  ConfigTable(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), ErrorCode::config, where() + " must be a table");
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  void allow_only(const std::set<std::string>& keys) const {
    for (const auto& [k, v] : j_.items())
      require(keys.count(k) > 0, ErrorCode::config, "unknown key '" + qualified(k) + "'");
  }

  ConfigTable table(const std::string& key) const {
    require(has(key), ErrorCode::config, "missing table '" + qualified(key) + "'");
    return ConfigTable(j_.at(key), qualified(key));
  }

  ConfigTable table_or_empty(const std::string& key) const {
    static const nlohmann::json empty = nlohmann::json::object();
    return has(key) ? table(key) : ConfigTable(empty, qualified(key));
  }

  std::int64_t integer(const std::string& key) const {
    const auto& v = at(key);
    require(v.is_number_integer(), ErrorCode::config, qualified(key) + " must be an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  double number(const std::string& key) const {
    const auto& v = at(key);
    require(v.is_number(), ErrorCode::config, qualified(key) + " must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::string string(const std::string& key) const {
    const auto& v = at(key);
    require(v.is_string(), ErrorCode::config, qualified(key) + " must be a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    require(v.is_boolean(), ErrorCode::config, qualified(key) + " must be true or false");
    return v.get<bool>();
  }

  std::vector<std::int64_t> integers(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const auto& v : array(key)) {
      require(v.is_number_integer(), ErrorCode::config, qualified(key) + " must hold integers");
      out.push_back(v.get<std::int64_t>());
    }
    return out;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& v : array(key)) {
      require(v.is_number(), ErrorCode::config, qualified(key) + " must hold numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  // A string or an array of strings.
  std::vector<std::string> strings(const std::string& key) const {
    const auto& v = at(key);
    if (v.is_string()) return {v.get<std::string>()};
    std::vector<std::string> out;
    for (const auto& e : array(key)) {
      require(e.is_string(), ErrorCode::config, qualified(key) + " must hold strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  const nlohmann::json& array(const std::string& key) const {
    const auto& v = at(key);
    require(v.is_array() && !v.empty(), ErrorCode::config,
            qualified(key) + " must be a non-empty array");
    return v;
  }

  const nlohmann::json& json() const { return j_; }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }
  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  const nlohmann::json& at(const std::string& key) const {
    require(has(key), ErrorCode::config, "missing key '" + qualified(key) + "'");
    return j_.at(key);
  }

  const nlohmann::json& j_;
  std::string path_;
};

}  // namespace chanlab
