#include "dmisac/keyvalue.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dmisac/errors.hpp"

namespace dmisac {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

KeyValueDoc KeyValueDoc::parse(std::string_view text, const std::string& origin) {
  KeyValueDoc doc;
  doc.origin_ = origin;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    for (const auto& e : doc.entries_) {
      if (e.key == key) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                          "' (first set on line " + std::to_string(e.line) + ")");
      }
    }
    doc.entries_.push_back(Entry{key, value, line_no, false});
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return parse(buf.str(), path);
}

const KeyValueDoc::Entry* KeyValueDoc::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

bool KeyValueDoc::contains(const std::string& key) const { return find(key) != nullptr; }

std::string KeyValueDoc::get_string(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) {
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  e->consumed = true;
  return e->value;
}

std::string KeyValueDoc::get_string_or(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  e->consumed = true;
  return e->value;
}

double KeyValueDoc::get_double(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) {
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  e->consumed = true;
  const char* begin = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                      "' is not a number: '" + e->value + "'");
  }
  return v;
}

double KeyValueDoc::get_double_or(const std::string& key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueDoc::get_int(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) {
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  e->consumed = true;
  const char* begin = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                      "' is not an integer: '" + e->value + "'");
  }
  return v;
}

std::int64_t KeyValueDoc::get_int_or(const std::string& key, std::int64_t fallback) const {
  return contains(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueDoc::get_u64(const std::string& key) const {
  const Entry* e = find(key);
  if (e == nullptr) {
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  e->consumed = true;
  const char* begin = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE || e->value.front() == '-') {
    throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                      "' is not an unsigned integer: '" + e->value + "'");
  }
  return v;
}

std::uint64_t KeyValueDoc::get_u64_or(const std::string& key, std::uint64_t fallback) const {
  return contains(key) ? get_u64(key) : fallback;
}

bool KeyValueDoc::get_bool_or(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  e->consumed = true;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                    "' is not a boolean: '" + e->value + "'");
}

std::vector<const KeyValueDoc::Entry*> KeyValueDoc::unconsumed() const {
  std::vector<const Entry*> out;
  for (const auto& e : entries_) {
    if (!e.consumed) out.push_back(&e);
  }
  return out;
}

void KeyValueDoc::reject_unconsumed() const {
  const auto leftovers = unconsumed();
  if (!leftovers.empty()) {
    const Entry* e = leftovers.front();
    throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": unknown key '" + e->key + "'");
  }
}

void KeyValueDoc::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_) {
    if (e.key == key) {
      e.value = value;
      return;
    }
  }
  entries_.push_back(Entry{key, value, 0, false});
}

void KeyValueDoc::set_double(const std::string& key, double value) {
  set(key, format_double_exact(value));
}

void KeyValueDoc::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void KeyValueDoc::set_int(const std::string& key, std::int64_t value) {
  set(key, std::to_string(value));
}

std::string KeyValueDoc::format() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.key;
    out += " = ";
    out += e.value;
    out += '\n';
  }
  return out;
}

}  // namespace dmisac
