// ucplab CLI: flat dotted-key configuration.
//
// Accepts a small TOML subset ([section] headers, key = value with strings,
// booleans, numbers, and one-line arrays, # comments) or an equivalent JSON
// object (nested objects flatten to dotted keys). Both forms resolve to the
// same map, the same canonical serialization, and therefore the same hash.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucplab {

struct MissingKeyError : std::runtime_error {
  std::string key;
  explicit MissingKeyError(const std::string& k)
      : std::runtime_error("missing required configuration key: " + k), key(k) {}
};

struct ConfigValue {
  enum class Kind { boolean, number, string, numberArray, stringArray };
  Kind kind = Kind::number;
  bool b = false;
  double num = 0.0;
  std::string str;
  std::vector<double> nums;
  std::vector<std::string> strs;

  std::string serialize() const;
};

class Config {
 public:
  Config() = default;

  // Dispatches on the file extension: .json via the JSON parser, anything
  // else through the TOML subset. Throws std::invalid_argument on malformed
  // input, naming the offending line or key.
  static Config load(const std::string& path);
  static Config parse_toml(const std::string& text);
  static Config parse_json(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  double number(const std::string& key) const;  // throws MissingKeyError
  double number_or(const std::string& key, double def) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long def) const;
  bool boolean_or(const std::string& key, bool def) const;
  std::string string_or(const std::string& key, const std::string& def) const;
  std::vector<double> numbers_or(const std::string& key, std::vector<double> def) const;

  void set_number(const std::string& key, double v);
  void set_string(const std::string& key, const std::string& v);

  // Sorted key=value lines; the hash input.
  std::string canonical() const;
  std::uint64_t fnv1a() const;

 private:
  const ConfigValue& at(const std::string& key) const;
  std::map<std::string, ConfigValue> kv_;
};

}  // namespace ucplab
