#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dmisac {

// Flat `key = value` document with dotted section keys, `#` comments and
// blank lines. Used for scenario files and run manifests.
//
// Typed getters remember which keys were read so that callers can reject
// unknown keys afterwards (typo protection).
class KeyValueDoc {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };

  // Parses `text`; `origin` (usually a file name) prefixes error messages.
  // Throws ConfigError with a line number on malformed input.
  static KeyValueDoc parse(std::string_view text, const std::string& origin);

  // Loads and parses a file. Throws IoError when unreadable.
  static KeyValueDoc load(const std::string& path);

  bool contains(const std::string& key) const;

  // Typed access. The `get_*` forms throw ConfigError when the key is
  // missing or unparsable; the `get_*_or` forms fall back to a default.
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;

  // Keys present in the document but never read through a getter.
  std::vector<const Entry*> unconsumed() const;

  // Throws ConfigError naming the first unknown key (with its line).
  void reject_unconsumed() const;

  // Document construction (manifest writing, config dumps).
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);  // full precision
  void set_u64(const std::string& key, std::uint64_t value);
  void set_int(const std::string& key, std::int64_t value);

  std::string format() const;
  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& origin() const { return origin_; }

 private:
  const Entry* find(const std::string& key) const;

  std::vector<Entry> entries_;
  std::string origin_;
};

// Full-precision double formatting ("%.17g"): parsing the result recovers
// the exact same double, which keeps save -> load -> save a fixed point.
std::string format_double_exact(double value);

}  // namespace dmisac
