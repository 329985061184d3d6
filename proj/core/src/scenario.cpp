#include "dmisac/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "dmisac/errors.hpp"

namespace dmisac {

const char* to_string(DeploymentKind kind) {
  switch (kind) {
    case DeploymentKind::kUniformSquare: return "uniform-square";
    case DeploymentKind::kCircle: return "circle";
    case DeploymentKind::kExplicitList: return "explicit-list";
  }
  return "?";
}

const char* to_string(BlockageKind kind) {
  switch (kind) {
    case BlockageKind::kNone: return "none";
    case BlockageKind::kDefaultServingSet: return "default-serving-set";
    case BlockageKind::kRandomLinks: return "random-links";
  }
  return "?";
}

DeploymentKind deployment_kind_from_string(const std::string& name) {
  if (name == "uniform-square") return DeploymentKind::kUniformSquare;
  if (name == "circle") return DeploymentKind::kCircle;
  if (name == "explicit-list") return DeploymentKind::kExplicitList;
  throw ConfigError("unknown deployment_kind '" + name +
                    "' (expected uniform-square, circle or explicit-list)");
}

BlockageKind blockage_kind_from_string(const std::string& name) {
  if (name == "none") return BlockageKind::kNone;
  if (name == "default-serving-set") return BlockageKind::kDefaultServingSet;
  if (name == "random-links") return BlockageKind::kRandomLinks;
  throw ConfigError("unknown blockage.kind '" + name +
                    "' (expected none, default-serving-set or random-links)");
}

void BlockageSpec::validate() const {
  if (kind == BlockageKind::kRandomLinks && !(probability >= 0.0 && probability <= 1.0)) {
    throw ConfigError("blockage.probability must be in [0, 1]");
  }
}

void ScenarioConfig::validate() const {
  if (!(area_side_m > 0.0)) throw ConfigError("area_side_m must be > 0");
  if (num_aps < 1) throw ConfigError("num_aps must be >= 1");
  if (num_ues < 1) throw ConfigError("num_ues must be >= 1");
  if (antennas_per_ap < 1) throw ConfigError("antennas_per_ap must be >= 1");
  if (cluster_size > num_aps) {
    throw ConfigError("cluster_size_L (" + std::to_string(cluster_size) +
                      ") must not exceed num_aps (" + std::to_string(num_aps) + ")");
  }
  if (deployment_kind == DeploymentKind::kExplicitList) {
    if (static_cast<int>(explicit_aps.size()) != num_aps) {
      throw ConfigError("ap_positions lists " + std::to_string(explicit_aps.size()) +
                        " coordinates but num_aps = " + std::to_string(num_aps));
    }
    if (static_cast<int>(explicit_ues.size()) != num_ues) {
      throw ConfigError("ue_positions lists " + std::to_string(explicit_ues.size()) +
                        " coordinates but num_ues = " + std::to_string(num_ues));
    }
  } else {
    if (!explicit_aps.empty() || !explicit_ues.empty()) {
      throw ConfigError("ap_positions/ue_positions are only valid with "
                        "deployment_kind = explicit-list");
    }
  }
  signal.validate();
  channel.validate();
  blockage.validate();
}

namespace {

void check_inside_area(const std::vector<Eigen::Vector3d>& points, double side,
                       const char* what) {
  for (const auto& p : points) {
    if (p.x() < 0.0 || p.x() > side || p.y() < 0.0 || p.y() > side || p.z() < 0.0 ||
        p.z() > side) {
      throw ConfigError(std::string(what) +
                        " coordinate outside the configured area (set "
                        "allow_outside_area = true to permit)");
    }
  }
}

void check_no_duplicate_aps(const std::vector<Eigen::Vector3d>& aps) {
  for (std::size_t i = 0; i < aps.size(); ++i) {
    for (std::size_t j = i + 1; j < aps.size(); ++j) {
      if ((aps[i] - aps[j]).norm() < kDuplicateApToleranceM) {
        throw ConfigError("APs " + std::to_string(i) + " and " + std::to_string(j) +
                          " are at identical coordinates");
      }
    }
  }
}

}  // namespace

Deployment generate_deployment(const ScenarioConfig& config) {
  config.validate();
  Deployment out;
  out.is_3d = config.use_3d;

  const double side = config.area_side_m;
  Rng rng(derive_seed(config.seed, SeedStream::kDeployment, 0));

  switch (config.deployment_kind) {
    case DeploymentKind::kUniformSquare: {
      out.ap_positions.reserve(config.num_aps);
      for (int i = 0; i < config.num_aps; ++i) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        const double z = config.use_3d ? rng.uniform(0.0, side) : 0.0;
        out.ap_positions.emplace_back(x, y, z);
      }
      out.ue_positions.reserve(config.num_ues);
      for (int i = 0; i < config.num_ues; ++i) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        const double z = config.use_3d ? rng.uniform(0.0, side) : 0.0;
        out.ue_positions.emplace_back(x, y, z);
      }
      break;
    }
    case DeploymentKind::kCircle: {
      // APs equally spaced on the inscribed circle, UEs uniform in the disk.
      const double r = 0.5 * side;
      const Eigen::Vector3d center(0.5 * side, 0.5 * side, 0.0);
      for (int i = 0; i < config.num_aps; ++i) {
        const double theta = 2.0 * kPi * static_cast<double>(i) / config.num_aps;
        out.ap_positions.push_back(center +
                                   Eigen::Vector3d(r * std::cos(theta), r * std::sin(theta), 0.0));
      }
      for (int i = 0; i < config.num_ues; ++i) {
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const double rho = r * std::sqrt(rng.uniform());
        out.ue_positions.push_back(center + Eigen::Vector3d(rho * std::cos(theta),
                                                            rho * std::sin(theta), 0.0));
      }
      break;
    }
    case DeploymentKind::kExplicitList: {
      out.ap_positions = config.explicit_aps;
      out.ue_positions = config.explicit_ues;
      if (!config.allow_outside_area) {
        check_inside_area(out.ap_positions, side, "AP");
        check_inside_area(out.ue_positions, side, "UE");
      }
      break;
    }
  }
  check_no_duplicate_aps(out.ap_positions);
  return out;
}

int BlockageMap::count_blocked() const {
  int n = 0;
  for (const auto b : blocked_) n += b;
  return n;
}

BlockageMap apply_blockage(const Deployment& deployment, const BlockageSpec& spec,
                           double penalty_db,
                           const std::vector<std::vector<int>>* default_sets,
                           std::uint64_t seed) {
  spec.validate();
  if (!(penalty_db >= 0.0)) throw ConfigError("blockage penalty must be >= 0 dB");
  const int num_aps = deployment.num_aps();
  const int num_ues = deployment.num_ues();
  BlockageMap map(num_aps, num_ues, penalty_db);

  switch (spec.kind) {
    case BlockageKind::kNone:
      break;
    case BlockageKind::kDefaultServingSet: {
      if (default_sets == nullptr) {
        throw ConfigError("default-serving-set blockage requires the default serving sets");
      }
      if (static_cast<int>(default_sets->size()) != num_ues) {
        throw ConfigError("default serving sets: expected one set per UE");
      }
      for (int ue = 0; ue < num_ues; ++ue) {
        for (const int ap : (*default_sets)[ue]) {
          if (ap < 0 || ap >= num_aps) {
            throw ConfigError("default serving set references AP index out of range");
          }
          map.set_blocked(ap, ue, true);
        }
      }
      break;
    }
    case BlockageKind::kRandomLinks: {
      Rng rng(derive_seed(seed, SeedStream::kBlockage, 0));
      for (int ap = 0; ap < num_aps; ++ap) {
        for (int ue = 0; ue < num_ues; ++ue) {
          map.set_blocked(ap, ue, rng.uniform() < spec.probability);
        }
      }
      break;
    }
  }
  return map;
}

}  // namespace dmisac
