#include "perfwall/kv_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <fmt/format.h>

#include "perfwall/errors.hpp"
#include "perfwall/text_util.hpp"

namespace perfwall {

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
    }
    std::string key = trim(trimmed.substr(0, eq));
    std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) throw ParseError(fmt::format("{}:{}: empty key", source, line_no));
    if (cfg.values_.count(key)) {
      throw ParseError(fmt::format("{}:{}: duplicate key '{}'", source, line_no, key));
    }
    cfg.values_.emplace(std::move(key), Entry{std::move(value), line_no});
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config file '{}'", path.string()));
  return parse(in, path.string());
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  const auto v = parse_double(it->second.value);
  if (!v) {
    throw ParseError(fmt::format("{}:{}: '{}' is not a number for key '{}'", source_,
                                 it->second.line, it->second.value, key));
  }
  return v;
}

std::optional<std::vector<double>> KeyValueConfig::get_double_list(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  std::vector<double> out;
  for (const auto& item : split(it->second.value, ',')) {
    const auto v = parse_double(trim(item));
    if (!v) {
      throw ParseError(fmt::format("{}:{}: '{}' is not a number list for key '{}'", source_,
                                   it->second.line, it->second.value, key));
    }
    out.push_back(*v);
  }
  return out;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : values_) {
    if (!known.count(key)) {
      throw ParseError(fmt::format("{}:{}: unknown key '{}'", source_, entry.line, key));
    }
  }
}

}  // namespace perfwall
