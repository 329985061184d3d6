#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dmisac/channel.hpp"
#include "dmisac/scenario.hpp"

namespace dmisac {

// The four information regimes of the uplink case study. Each regime fixes
// two booleans: does the network know the blockage state (sensing), and
// does it have instantaneous CSI (localization / radio map)?
enum class IsacRegime { kWithIsac, kWithLocalization, kWithSensing, kWithoutIsac };

inline constexpr IsacRegime kAllRegimes[] = {
    IsacRegime::kWithIsac, IsacRegime::kWithSensing, IsacRegime::kWithLocalization,
    IsacRegime::kWithoutIsac};

bool regime_knows_blockage(IsacRegime regime);
bool regime_knows_csi(IsacRegime regime);
const char* to_string(IsacRegime regime);
IsacRegime regime_from_string(const std::string& name);

enum class AssignmentKind { kDefault, kBackup };

// Per-UE ordered serving AP sets (dynamic cooperation clustering).
struct ServingAssignment {
  std::vector<std::vector<int>> serving_aps;
  AssignmentKind kind = AssignmentKind::kDefault;
  bool shortfall = false;  // some UE had fewer than L eligible APs
};

// Nearest-L selection. kDefault ignores blockage; kBackup restricts to
// unblocked links. Distance ties break toward the lower AP index. A UE with
// zero eligible APs raises ConfigError; fewer than L sets the shortfall flag.
ServingAssignment assign_clusters(const Deployment& deployment, const BlockageMap& blockage,
                                  int cluster_size, AssignmentKind kind);

enum class CsiQuality { kPerfect, kStatistical };

// Combiner input: the true channel (perfect) or its deterministic Rician
// mean (statistical; no small-scale knowledge).
Eigen::VectorXcd csi_view(const ChannelRealization& truth, CsiQuality quality);

// Uplink MRC with dynamic cooperation clustering. `channels` and `views`
// are (num_aps * antennas_per_ap) x num_ues; the combiner for UE i is its
// view restricted to its serving set. Returns SE per UE in bits/s/Hz:
// SE_i = log2(1 + snr |v^H h_i|^2 / (snr sum_{j != i} |v^H h_j|^2 + ||v||^2)).
std::vector<double> mrc_sinr_se(const Eigen::MatrixXcd& channels,
                                const Eigen::MatrixXcd& views,
                                const ServingAssignment& assignment, int antennas_per_ap,
                                double tx_snr);

struct SeRow {
  double snr_db = 0.0;
  IsacRegime regime = IsacRegime::kWithoutIsac;
  double se_per_ue = 0.0;
  int realizations = 0;
};

struct SeCurve {
  std::vector<SeRow> rows;
  std::uint64_t seed = 0;
  int num_ues = 0;
};

// Averaged uplink SE per (transmit SNR, regime). Each realization redraws
// UE positions, shadow fading and small-scale fading; the four regimes see
// identical channels within a realization (paired comparison). Averaging is
// performed in realization order, so outputs do not depend on `jobs`.
SeCurve se_sweep(const ScenarioConfig& config, std::span<const IsacRegime> regimes,
                 std::span<const double> snr_grid_db, int realizations, int jobs = 1);

}  // namespace dmisac
