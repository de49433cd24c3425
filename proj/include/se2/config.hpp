#ifndef SE2_CONFIG_HPP
#define SE2_CONFIG_HPP

// `key = value` configuration files. Precedence when building parameters:
// command-line flags, then the file, then built-in defaults.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "se2/presentation_io.hpp"
#include "se2/verify.hpp"

namespace se2 {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse(std::string_view text) {
    Config c;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key(detail::trim(line.substr(0, eq)));
      const std::string value(detail::trim(line.substr(eq + 1)));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      if (!known(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      c.values_[key] = value;
    }
    return c;
  }

  static bool known(std::string_view key) {
    for (std::string_view k : {"max_rules", "tidy_interval", "max_equations", "max_overlap_length",
                               "max_stored_length", "check_every", "checkpoint_every", "stop_when_certified"})
      if (k == key) return true;
    return false;
  }

  std::optional<std::string> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  void set(const std::string& key, std::string value) {
    if (!known(key)) throw ConfigError("unknown key '" + key + "'");
    values_[key] = std::move(value);
  }

  /// Entries of `over` replace entries of `*this`.
  Config merged(const Config& over) const {
    Config c = *this;
    for (const auto& [k, v] : over.values_) c.values_[k] = v;
    return c;
  }

  VerifyParams to_params(VerifyParams base = {}) const {
    auto number = [&](const char* key, auto& field) {
      if (auto v = get(key)) field = static_cast<std::remove_reference_t<decltype(field)>>(to_u64(key, *v));
    };
    number("max_rules", base.completion.max_rules);
    number("tidy_interval", base.completion.tidy_interval);
    number("max_equations", base.completion.max_equations);
    number("max_overlap_length", base.completion.max_overlap_length);
    number("max_stored_length", base.completion.max_stored_length);
    number("check_every", base.check_every);
    number("checkpoint_every", base.checkpoint_every);
    if (auto v = get("stop_when_certified")) {
      if (*v == "true" || *v == "1") base.stop_when_certified = true;
      else if (*v == "false" || *v == "0") base.stop_when_certified = false;
      else throw ConfigError("stop_when_certified: expected true or false, got '" + *v + "'");
    }
    if (base.completion.tidy_interval == 0) throw ConfigError("tidy_interval must be positive");
    if (base.check_every == 0) throw ConfigError("check_every must be positive");
    return base;
  }

 private:
  static std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    std::uint64_t x = 0;
    try {
      if (v.empty() || v.front() == '-') throw std::invalid_argument("sign");
      x = std::stoull(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty()) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return x;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace se2

#endif
