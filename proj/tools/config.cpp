#include "config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ucplab/report.hpp"

namespace ucplab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strips a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool inStr = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') inStr = !inStr;
    if (line[i] == '#' && !inStr) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size();
}

ConfigValue parse_scalar(const std::string& raw, const std::string& where) {
  const std::string t = trim(raw);
  ConfigValue v;
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
    v.kind = ConfigValue::Kind::string;
    v.str = t.substr(1, t.size() - 2);
    return v;
  }
  if (t == "true" || t == "false") {
    v.kind = ConfigValue::Kind::boolean;
    v.b = (t == "true");
    return v;
  }
  double num = 0;
  if (parse_number(t, num)) {
    v.kind = ConfigValue::Kind::number;
    v.num = num;
    return v;
  }
  throw std::invalid_argument("config: cannot parse value '" + t + "' at " + where);
}

ConfigValue parse_value(const std::string& raw, const std::string& where) {
  const std::string t = trim(raw);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']')
      throw std::invalid_argument("config: unterminated array at " + where);
    ConfigValue v;
    std::vector<std::string> parts;
    std::string cur;
    bool inStr = false;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      const char ch = t[i];
      if (ch == '"') inStr = !inStr;
      if (ch == ',' && !inStr) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    bool allNumbers = true;
    for (const auto& pstr : parts) {
      const ConfigValue el = parse_scalar(pstr, where);
      if (el.kind == ConfigValue::Kind::number) {
        v.nums.push_back(el.num);
      } else if (el.kind == ConfigValue::Kind::string) {
        allNumbers = false;
        v.strs.push_back(el.str);
      } else {
        throw std::invalid_argument("config: array elements must be numbers or strings at " +
                                    where);
      }
    }
    if (!allNumbers && !v.nums.empty())
      throw std::invalid_argument("config: mixed array element types at " + where);
    v.kind = allNumbers ? ConfigValue::Kind::numberArray : ConfigValue::Kind::stringArray;
    return v;
  }
  return parse_scalar(t, where);
}

}  // namespace

std::string ConfigValue::serialize() const {
  switch (kind) {
    case Kind::boolean:
      return b ? "true" : "false";
    case Kind::number:
      return fmt_double(num);
    case Kind::string:
      return "\"" + str + "\"";
    case Kind::numberArray: {
      std::string out = "[";
      for (std::size_t i = 0; i < nums.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(nums[i]);
      }
      return out + "]";
    }
    case Kind::stringArray: {
      std::string out = "[";
      for (std::size_t i = 0; i < strs.size(); ++i) {
        if (i) out += ",";
        out += "\"" + strs[i] + "\"";
      }
      return out + "]";
    }
  }
  return "";
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return parse_json(buf.str());
  return parse_toml(buf.str());
}

Config Config::parse_toml(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno);
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::invalid_argument("config: malformed section header at " + where);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw std::invalid_argument("config: empty section name at " + where);
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at " + where);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config: empty key at " + where);
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.kv_[full] = parse_value(t.substr(eq + 1), where);
  }
  return cfg;
}

Config Config::parse_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: JSON root must be an object");
  Config cfg;
  std::function<void(const std::string&, const nlohmann::json&)> walk =
      [&](const std::string& prefix, const nlohmann::json& node) {
        for (const auto& [k, v] : node.items()) {
          const std::string full = prefix.empty() ? k : prefix + "." + k;
          ConfigValue cv;
          if (v.is_object()) {
            walk(full, v);
            continue;
          }
          if (v.is_boolean()) {
            cv.kind = ConfigValue::Kind::boolean;
            cv.b = v.get<bool>();
          } else if (v.is_number()) {
            cv.kind = ConfigValue::Kind::number;
            cv.num = v.get<double>();
          } else if (v.is_string()) {
            cv.kind = ConfigValue::Kind::string;
            cv.str = v.get<std::string>();
          } else if (v.is_array()) {
            bool allNumbers = true, allStrings = true;
            for (const auto& el : v) {
              allNumbers = allNumbers && el.is_number();
              allStrings = allStrings && el.is_string();
            }
            if (allNumbers) {
              cv.kind = ConfigValue::Kind::numberArray;
              for (const auto& el : v) cv.nums.push_back(el.get<double>());
            } else if (allStrings) {
              cv.kind = ConfigValue::Kind::stringArray;
              for (const auto& el : v) cv.strs.push_back(el.get<std::string>());
            } else {
              throw std::invalid_argument("config: array elements must be numbers or strings at " +
                                          full);
            }
          } else {
            throw std::invalid_argument("config: unsupported value type at " + full);
          }
          cfg.kv_[full] = std::move(cv);
        }
      };
  walk("", root);
  return cfg;
}

const ConfigValue& Config::at(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw MissingKeyError(key);
  return it->second;
}

double Config::number(const std::string& key) const {
  const ConfigValue& v = at(key);
  if (v.kind != ConfigValue::Kind::number)
    throw std::invalid_argument("config: key " + key + " is not a number");
  return v.num;
}

double Config::number_or(const std::string& key, double def) const {
  return has(key) ? number(key) : def;
}

long long Config::integer(const std::string& key) const {
  const double v = number(key);
  const long long i = std::llround(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("config: key " + key + " is not an integer");
  return i;
}

long long Config::integer_or(const std::string& key, long long def) const {
  return has(key) ? integer(key) : def;
}

bool Config::boolean_or(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const ConfigValue& v = at(key);
  if (v.kind != ConfigValue::Kind::boolean)
    throw std::invalid_argument("config: key " + key + " is not a boolean");
  return v.b;
}

std::string Config::string_or(const std::string& key, const std::string& def) const {
  if (!has(key)) return def;
  const ConfigValue& v = at(key);
  if (v.kind != ConfigValue::Kind::string)
    throw std::invalid_argument("config: key " + key + " is not a string");
  return v.str;
}

std::vector<double> Config::numbers_or(const std::string& key, std::vector<double> def) const {
  if (!has(key)) return def;
  const ConfigValue& v = at(key);
  if (v.kind == ConfigValue::Kind::number) return {v.num};
  if (v.kind != ConfigValue::Kind::numberArray)
    throw std::invalid_argument("config: key " + key + " is not a number array");
  return v.nums;
}

void Config::set_number(const std::string& key, double v) {
  ConfigValue cv;
  cv.kind = ConfigValue::Kind::number;
  cv.num = v;
  kv_[key] = cv;
}

void Config::set_string(const std::string& key, const std::string& v) {
  ConfigValue cv;
  cv.kind = ConfigValue::Kind::string;
  cv.str = v;
  kv_[key] = cv;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : kv_) out += k + "=" + v.serialize() + "\n";
  return out;
}

std::uint64_t Config::fnv1a() const {
  const std::string s = canonical();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ucplab
