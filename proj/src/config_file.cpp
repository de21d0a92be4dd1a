#include "sniht/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sniht {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigMap ConfigMap::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str(), path.string());
}

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
  ConfigMap cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    cfg.lines_.push_back(line);
    const auto hash = line.find('#');
    std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (cfg.values_.count(key)) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                               key + "'");
    }
    cfg.values_[key] = value;
    cfg.order_.push_back(key);
  }
  return cfg;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) != 0; }

std::string ConfigMap::take(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::runtime_error(origin_ + ": missing required key '" + key + "'");
  }
  consumed_.insert(key);
  return it->second;
}

std::string ConfigMap::get_string(const std::string& key) { return take(key); }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return take(key);
}

long long ConfigMap::get_int(const std::string& key) {
  const std::string v = take(key);
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key + "': '" + v + "' is not an integer");
  }
  if (used != v.size()) {
    throw std::runtime_error(origin_ + ": key '" + key + "': '" + v + "' is not an integer");
  }
  return out;
}

long long ConfigMap::get_int(const std::string& key, long long fallback) {
  if (!has(key)) return fallback;
  return get_int(key);
}

double ConfigMap::get_double(const std::string& key) {
  const std::string v = take(key);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key + "': '" + v + "' is not a number");
  }
  if (used != v.size()) {
    throw std::runtime_error(origin_ + ": key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

double ConfigMap::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

std::vector<std::string> ConfigMap::get_string_list(const std::string& key) {
  std::istringstream iss(take(key));
  std::vector<std::string> out;
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  if (out.empty()) {
    throw std::runtime_error(origin_ + ": key '" + key + "' has an empty list value");
  }
  return out;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) {
  const auto toks = get_string_list(key);
  std::vector<double> out;
  for (const auto& t : toks) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw std::runtime_error(origin_ + ": key '" + key + "': '" + t + "' is not a number");
    }
    if (used != t.size()) {
      throw std::runtime_error(origin_ + ": key '" + key + "': '" + t + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

void ConfigMap::check_consumed() const {
  for (const auto& key : order_) {
    if (!consumed_.count(key)) {
      throw std::runtime_error(origin_ + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace sniht
