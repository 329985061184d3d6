#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dmisac/errors.hpp"
#include "dmisac/keyvalue.hpp"
#include "dmisac/scenario.hpp"

namespace dmisac {

namespace {

// Coordinate lists are written as semicolon-separated tuples, e.g.
// `ap_positions = 0 0; 10 0; 10 10`.
std::vector<Eigen::Vector3d> parse_position_list(const std::string& text,
                                                 const std::string& key) {
  std::vector<Eigen::Vector3d> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::stringstream fields(group);
    std::vector<double> coords;
    std::string token;
    while (fields >> token) {
      const char* begin = token.c_str();
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(begin, &end);
      if (end == begin || *end != '\0' || errno == ERANGE) {
        throw ConfigError("key '" + key + "': bad coordinate '" + token + "'");
      }
      coords.push_back(v);
    }
    if (coords.empty()) continue;  // tolerate trailing semicolon
    if (coords.size() != 2 && coords.size() != 3) {
      throw ConfigError("key '" + key + "': coordinates must have 2 or 3 components");
    }
    out.emplace_back(coords[0], coords[1], coords.size() == 3 ? coords[2] : 0.0);
  }
  return out;
}

std::string format_position_list(const std::vector<Eigen::Vector3d>& points, bool is_3d) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out += "; ";
    out += format_double_exact(points[i].x());
    out += ' ';
    out += format_double_exact(points[i].y());
    if (is_3d) {
      out += ' ';
      out += format_double_exact(points[i].z());
    }
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  const KeyValueDoc doc = KeyValueDoc::parse(text, origin);
  ScenarioConfig config;

  config.area_side_m = doc.get_double("area_side_m");
  config.num_aps = static_cast<int>(doc.get_int("num_aps"));
  config.num_ues = static_cast<int>(doc.get_int("num_ues"));
  config.seed = doc.get_u64("seed");
  config.antennas_per_ap = static_cast<int>(doc.get_int_or("antennas_per_ap", 1));
  config.deployment_kind =
      deployment_kind_from_string(doc.get_string_or("deployment_kind", "uniform-square"));
  config.use_3d = doc.get_bool_or("use_3d", false);
  config.cluster_size = static_cast<int>(doc.get_int_or("cluster_size_L", 0));
  config.allow_outside_area = doc.get_bool_or("allow_outside_area", false);

  if (doc.contains("ap_positions")) {
    config.explicit_aps = parse_position_list(doc.get_string("ap_positions"), "ap_positions");
  }
  if (doc.contains("ue_positions")) {
    config.explicit_ues = parse_position_list(doc.get_string("ue_positions"), "ue_positions");
  }

  config.signal.carrier_hz = doc.get_double("signal.carrier_hz");
  config.signal.bandwidth_hz = doc.get_double("signal.bandwidth_hz");
  config.signal.num_subcarriers = static_cast<int>(doc.get_int_or("signal.num_subcarriers", 64));
  config.signal.ref_snr_db = doc.get_double_or("signal.ref_snr_db", 20.0);
  config.signal.ref_distance_m = doc.get_double_or("signal.ref_distance_m", 1.0);
  config.signal.pathloss_exponent = doc.get_double_or("signal.pathloss_exponent", 2.0);

  config.channel.rician_k_db = doc.get_double_or("channel.rician_k_db", 10.0);
  config.channel.rician_k_blocked_db = doc.get_double_or(
      "channel.rician_k_blocked_db", -std::numeric_limits<double>::infinity());
  config.channel.shadow_sigma_db = doc.get_double_or("channel.shadow_sigma_db", 4.0);
  config.channel.blockage_penalty_db = doc.get_double_or("channel.blockage_penalty_db", 25.0);

  config.blockage.kind = blockage_kind_from_string(doc.get_string_or("blockage.kind", "none"));
  config.blockage.probability = doc.get_double_or("blockage.probability", 0.0);

  doc.reject_unconsumed();
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return parse_scenario(buf.str(), path);
}

std::string format_scenario(const ScenarioConfig& config) {
  KeyValueDoc doc;
  doc.set_double("area_side_m", config.area_side_m);
  doc.set_int("num_aps", config.num_aps);
  doc.set_int("num_ues", config.num_ues);
  doc.set_int("antennas_per_ap", config.antennas_per_ap);
  doc.set("deployment_kind", to_string(config.deployment_kind));
  doc.set("use_3d", config.use_3d ? "true" : "false");
  doc.set_u64("seed", config.seed);
  if (config.cluster_size > 0) doc.set_int("cluster_size_L", config.cluster_size);
  if (config.deployment_kind == DeploymentKind::kExplicitList) {
    doc.set("ap_positions", format_position_list(config.explicit_aps, config.use_3d));
    doc.set("ue_positions", format_position_list(config.explicit_ues, config.use_3d));
    doc.set("allow_outside_area", config.allow_outside_area ? "true" : "false");
  }
  doc.set_double("signal.carrier_hz", config.signal.carrier_hz);
  doc.set_double("signal.bandwidth_hz", config.signal.bandwidth_hz);
  doc.set_int("signal.num_subcarriers", config.signal.num_subcarriers);
  doc.set_double("signal.ref_snr_db", config.signal.ref_snr_db);
  doc.set_double("signal.ref_distance_m", config.signal.ref_distance_m);
  doc.set_double("signal.pathloss_exponent", config.signal.pathloss_exponent);
  doc.set_double("channel.rician_k_db", config.channel.rician_k_db);
  doc.set_double("channel.rician_k_blocked_db", config.channel.rician_k_blocked_db);
  doc.set_double("channel.shadow_sigma_db", config.channel.shadow_sigma_db);
  doc.set_double("channel.blockage_penalty_db", config.channel.blockage_penalty_db);
  doc.set("blockage.kind", to_string(config.blockage.kind));
  if (config.blockage.kind == BlockageKind::kRandomLinks) {
    doc.set_double("blockage.probability", config.blockage.probability);
  }
  return doc.format();
}

std::string format_deployment_csv(const Deployment& deployment) {
  std::string out = deployment.is_3d ? "kind,index,x_m,y_m,z_m\n" : "kind,index,x_m,y_m\n";
  const auto emit = [&](const char* kind, const std::vector<Eigen::Vector3d>& points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      out += kind;
      out += ',';
      out += std::to_string(i);
      out += ',';
      out += format_double_exact(points[i].x());
      out += ',';
      out += format_double_exact(points[i].y());
      if (deployment.is_3d) {
        out += ',';
        out += format_double_exact(points[i].z());
      }
      out += '\n';
    }
  };
  emit("ap", deployment.ap_positions);
  emit("ue", deployment.ue_positions);
  return out;
}

Deployment parse_deployment_csv(const std::string& text, const std::string& origin) {
  Deployment out;
  std::stringstream lines(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string kind, index, x, y, z;
    std::getline(fields, kind, ',');
    std::getline(fields, index, ',');
    std::getline(fields, x, ',');
    std::getline(fields, y, ',');
    const bool has_z = static_cast<bool>(std::getline(fields, z, ','));
    if (!saw_header) {
      if (kind != "kind") {
        throw IoError(origin + ":" + std::to_string(line_no) + ": missing deployment header");
      }
      out.is_3d = has_z;
      saw_header = true;
      continue;
    }
    const Eigen::Vector3d p(std::strtod(x.c_str(), nullptr), std::strtod(y.c_str(), nullptr),
                            has_z ? std::strtod(z.c_str(), nullptr) : 0.0);
    if (kind == "ap") {
      out.ap_positions.push_back(p);
    } else if (kind == "ue") {
      out.ue_positions.push_back(p);
    } else {
      throw IoError(origin + ":" + std::to_string(line_no) + ": unknown row kind '" + kind + "'");
    }
  }
  if (!saw_header) throw IoError(origin + ": empty deployment file");
  return out;
}

void save_deployment_csv(const Deployment& deployment, const std::string& path) {
  std::ofstream outfile(path, std::ios::binary);
  if (!outfile) throw IoError("cannot open '" + path + "' for writing");
  outfile << format_deployment_csv(deployment);
  if (!outfile) throw IoError("write failure on '" + path + "'");
}

Deployment load_deployment_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_deployment_csv(buf.str(), path);
}

}  // namespace dmisac
