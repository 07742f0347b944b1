#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace perfwall {

// Flat "key = value" text. '#' starts a comment; blank lines are ignored.
// Duplicate keys and lines without '=' are ParseErrors carrying the line number.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<input>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::vector<double>> get_double_list(const std::string& key) const;

  // Throws ParseError naming the first key not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> values_;
  std::string source_;
};

}  // namespace perfwall
