#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmisac/keyvalue.hpp"
#include "dmisac/scenario.hpp"

namespace dmisac::cli {

// Reproducibility sidecar written next to every CSV. `run.*` keys hold the
// command and its resolved parameters, `config.*` the fully resolved
// scenario; replaying those reproduces the CSV byte for byte.
class RunManifest {
 public:
  RunManifest(const std::string& command, const ScenarioConfig& resolved_config);

  void set_param(const std::string& name, const std::string& value);
  void set_param_u64(const std::string& name, std::uint64_t value);
  void set_output(const std::string& path);
  void set_duration_ms(std::int64_t ms);

  std::string format() const;
  void write(const std::string& path) const;

 private:
  KeyValueDoc doc_;
};

// Extracts the embedded scenario (the `config.*` keys) from a manifest.
std::string scenario_text_from_manifest(const std::string& manifest_path);

}  // namespace dmisac::cli
