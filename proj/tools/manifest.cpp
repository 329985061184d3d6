#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include "dmisac/errors.hpp"
#include "dmisac/version.hpp"

namespace dmisac::cli {

RunManifest::RunManifest(const std::string& command, const ScenarioConfig& resolved_config) {
  doc_.set("run.command", command);
  doc_.set("run.version", kVersion);
  doc_.set_u64("run.seed", resolved_config.seed);
  const KeyValueDoc config_doc =
      KeyValueDoc::parse(format_scenario(resolved_config), "<resolved config>");
  for (const auto& entry : config_doc.entries()) {
    doc_.set("config." + entry.key, entry.value);
  }
}

void RunManifest::set_param(const std::string& name, const std::string& value) {
  doc_.set("run." + name, value);
}

void RunManifest::set_param_u64(const std::string& name, std::uint64_t value) {
  doc_.set_u64("run." + name, value);
}

void RunManifest::set_output(const std::string& path) { doc_.set("run.output", path); }

void RunManifest::set_duration_ms(std::int64_t ms) { doc_.set_int("run.duration_ms", ms); }

std::string RunManifest::format() const { return doc_.format(); }

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open manifest '" + path + "' for writing");
  out << format();
  if (!out) throw IoError("write failure on manifest '" + path + "'");
}

std::string scenario_text_from_manifest(const std::string& manifest_path) {
  const KeyValueDoc doc = KeyValueDoc::load(manifest_path);
  std::string text;
  for (const auto& entry : doc.entries()) {
    if (entry.key.rfind("config.", 0) == 0) {
      text += entry.key.substr(7);
      text += " = ";
      text += entry.value;
      text += '\n';
    }
  }
  if (text.empty()) {
    throw ConfigError(manifest_path + ": no config.* keys found");
  }
  return text;
}

}  // namespace dmisac::cli
