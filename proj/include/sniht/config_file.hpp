#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sniht {

/// Flat `key = value` run configuration. '#' starts a comment, blank lines
/// are ignored, duplicate keys are errors. Consumers mark the keys they
/// understand; check_consumed() turns any leftover key into a hard error so
/// that typos cannot silently change an experiment.
class ConfigMap {
public:
  static ConfigMap parse_file(const std::filesystem::path& path);
  static ConfigMap parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  long long get_int(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::vector<double> get_double_list(const std::string& key);
  std::vector<std::string> get_string_list(const std::string& key);

  /// Throws naming the first key that was never consumed.
  void check_consumed() const;

  /// Original text lines, for echoing into run manifests.
  const std::vector<std::string>& lines() const { return lines_; }

private:
  std::string take(const std::string& key);
  std::string origin_;
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
  std::set<std::string> consumed_;
  std::vector<std::string> lines_;
};

}  // namespace sniht
