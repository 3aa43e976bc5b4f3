#pragma once

// Flat key = value configuration files.
//
//   # full-line comment
//   key = value
//
// Keys are [a-z0-9_.-]+, values are trimmed verbatim, blank lines are
// ignored, duplicate keys are an error. Consumers mark keys as they read
// them; anything left unread is rejected, so typos fail loudly.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rdcbench/util.hpp"

namespace rdc {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>") {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view body = str::trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos)
        throw Error(origin + ": line " + std::to_string(line_no) + ": expected \"key = value\"");
      std::string key(str::trim(body.substr(0, eq)));
      std::string value(str::trim(body.substr(eq + 1)));
      if (key.empty() || !valid_key(key))
        throw Error(origin + ": line " + std::to_string(line_no) + ": bad key \"" + key + "\"");
      if (cfg.find(key))
        throw Error(origin + ": line " + std::to_string(line_no) + ": duplicate key \"" + key + "\"");
      cfg.entries_.push_back({std::move(key), std::move(value), false});
    }
    return cfg;
  }

  static KeyValueConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  // Set or overwrite a key (command-line flags override file values).
  void set(const std::string& key, const std::string& value) {
    if (Entry* e = find(key)) {
      e->value = value;
      return;
    }
    entries_.push_back({key, value, false});
  }

  bool has(const std::string& key) const {
    return const_cast<KeyValueConfig*>(this)->find(key) != nullptr;
  }

  std::optional<std::string> get_string(const std::string& key) {
    if (Entry* e = find(key)) {
      e->used = true;
      return e->value;
    }
    return std::nullopt;
  }

  std::optional<std::uint64_t> get_u64(const std::string& key) {
    auto s = get_string(key);
    if (!s) return std::nullopt;
    auto v = str::parse_u64(*s);
    if (!v) throw Error(origin_ + ": key \"" + key + "\": expected an unsigned integer, got \"" + *s + "\"");
    return v;
  }

  std::optional<double> get_f64(const std::string& key) {
    auto s = get_string(key);
    if (!s) return std::nullopt;
    auto v = str::parse_f64(*s);
    if (!v) throw Error(origin_ + ": key \"" + key + "\": expected a number, got \"" + *s + "\"");
    return v;
  }

  std::optional<bool> get_bool(const std::string& key) {
    auto s = get_string(key);
    if (!s) return std::nullopt;
    const std::string t = str::lower(*s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw Error(origin_ + ": key \"" + key + "\": expected true/false, got \"" + *s + "\"");
  }

  std::optional<std::vector<std::string>> get_list(const std::string& key) {
    auto s = get_string(key);
    if (!s) return std::nullopt;
    std::vector<std::string> out;
    for (auto part : str::split(*s, ","))
      if (auto t = str::trim(part); !t.empty()) out.emplace_back(t);
    return out;
  }

  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const Entry& e : entries_)
      if (!e.used) out.push_back(e.key);
    return out;
  }

  void reject_unused() const {
    auto leftover = unused_keys();
    if (leftover.empty()) return;
    std::string msg = origin_ + ": unknown key(s):";
    for (const auto& k : leftover) msg += " " + k;
    throw Error(msg);
  }

  // Sorted key=value lines; the input for config hashing.
  std::string canonical() const {
    std::vector<std::pair<std::string, std::string>> kv;
    for (const Entry& e : entries_) kv.push_back({e.key, e.value});
    std::sort(kv.begin(), kv.end());
    std::string out;
    for (const auto& [k, v] : kv) {
      out += k;
      out += "=";
      out += v;
      out += "\n";
    }
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string key, value;
    bool used;
  };

  static bool valid_key(const std::string& key) {
    return std::all_of(key.begin(), key.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    });
  }

  Entry* find(const std::string& key) {
    for (Entry& e : entries_)
      if (e.key == key) return &e;
    return nullptr;
  }

  std::vector<Entry> entries_;
  std::string origin_ = "<config>";
};

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rdc
