#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dmisac/channel.hpp"

namespace dmisac {

enum class DeploymentKind { kUniformSquare, kCircle, kExplicitList };
enum class BlockageKind { kNone, kDefaultServingSet, kRandomLinks };

const char* to_string(DeploymentKind kind);
const char* to_string(BlockageKind kind);
DeploymentKind deployment_kind_from_string(const std::string& name);
BlockageKind blockage_kind_from_string(const std::string& name);

struct BlockageSpec {
  BlockageKind kind = BlockageKind::kNone;
  double probability = 0.0;  // random-links only

  void validate() const;
};

// Two APs closer than this are rejected as duplicates.
inline constexpr double kDuplicateApToleranceM = 1e-6;

struct ScenarioConfig {
  double area_side_m = 0.0;
  int num_aps = 0;
  int num_ues = 0;
  int antennas_per_ap = 1;
  DeploymentKind deployment_kind = DeploymentKind::kUniformSquare;
  bool use_3d = false;
  std::uint64_t seed = 0;
  int cluster_size = 0;  // serving APs per UE (L); 0 = min(5, num_aps)

  SignalModel signal;
  ChannelParams channel;
  BlockageSpec blockage;

  // explicit-list deployments only
  std::vector<Eigen::Vector3d> explicit_aps;
  std::vector<Eigen::Vector3d> explicit_ues;
  bool allow_outside_area = false;

  int effective_cluster_size() const {
    return cluster_size > 0 ? cluster_size : std::min(5, num_aps);
  }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct Deployment {
  std::vector<Eigen::Vector3d> ap_positions;
  std::vector<Eigen::Vector3d> ue_positions;
  bool is_3d = false;

  int num_aps() const { return static_cast<int>(ap_positions.size()); }
  int num_ues() const { return static_cast<int>(ue_positions.size()); }

  LinkGeometry link(int ap, int ue) const {
    return LinkGeometry{ap_positions.at(ap), ue_positions.at(ue)};
  }
};

// Boolean blockage state per (AP, UE) link plus the penalty applied to
// blocked links.
class BlockageMap {
 public:
  BlockageMap() = default;
  BlockageMap(int num_aps, int num_ues, double penalty_db)
      : num_aps_(num_aps), num_ues_(num_ues), penalty_db_(penalty_db),
        blocked_(static_cast<std::size_t>(num_aps) * num_ues, 0) {}

  static BlockageMap all_clear(int num_aps, int num_ues) {
    return BlockageMap(num_aps, num_ues, 0.0);
  }

  bool is_blocked(int ap, int ue) const { return blocked_[index(ap, ue)] != 0; }
  void set_blocked(int ap, int ue, bool value) { blocked_[index(ap, ue)] = value ? 1 : 0; }
  int count_blocked() const;

  int num_aps() const { return num_aps_; }
  int num_ues() const { return num_ues_; }
  double penalty_db() const { return penalty_db_; }

 private:
  std::size_t index(int ap, int ue) const {
    return static_cast<std::size_t>(ap) * num_ues_ + ue;
  }

  int num_aps_ = 0;
  int num_ues_ = 0;
  double penalty_db_ = 0.0;
  std::vector<std::uint8_t> blocked_;
};

// Draws AP and UE positions per the configured distribution. Identical
// (config, seed) yields identical output.
Deployment generate_deployment(const ScenarioConfig& config);

// Marks blocked links per the spec. `default_sets` (serving AP indices per
// UE) is required for kDefaultServingSet and ignored otherwise.
BlockageMap apply_blockage(const Deployment& deployment, const BlockageSpec& spec,
                           double penalty_db,
                           const std::vector<std::vector<int>>* default_sets,
                           std::uint64_t seed);

// --- scenario / deployment serialization -----------------------------------

// Parses and validates a scenario file (UTF-8 `key = value`, dotted
// sections, unknown keys rejected).
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);

// Full-precision dump of a resolved config; load(format(x)) == x.
std::string format_scenario(const ScenarioConfig& config);

// Deployment snapshot CSV: header `kind,index,x_m,y_m` (plus z_m in 3-D
// mode), coordinates at full precision so re-serialization is a fixed point.
std::string format_deployment_csv(const Deployment& deployment);
Deployment parse_deployment_csv(const std::string& text, const std::string& origin);
void save_deployment_csv(const Deployment& deployment, const std::string& path);
Deployment load_deployment_csv(const std::string& path);

}  // namespace dmisac
