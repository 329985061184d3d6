#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dmisac/scenario.hpp"

namespace dmisac {

enum class PositioningMode { kDelay, kPhase };

const char* to_string(PositioningMode mode);
PositioningMode positioning_mode_from_string(const std::string& name);

// Position-domain information matrix (2x2 in 2-D, 3x3 in 3-D), together
// with the per-AP SNRs that produced it.
struct FisherInfo {
  Eigen::MatrixXd info;
  std::vector<double> ap_snrs;
  PositioningMode mode = PositioningMode::kDelay;
};

struct PebResult {
  double peb_m = 0.0;
  PositioningMode mode = PositioningMode::kDelay;
  int num_aps = 0;
};

// J is declared singular above this condition number.
inline constexpr double kSingularConditionThreshold = 1e12;

// Deterministic per-link SNR used by the positioning experiments: reference
// SNR x power-law path gain (no shadowing, no blockage), times the AP
// antenna count.
double link_snr(const LinkGeometry& link, const SignalModel& model, int antennas = 1);

// Delay-measurement information: J = sum_k (8 pi^2 beta_rms^2 SNR_k / c^2)
// u_k u_k^T with beta_rms = B / sqrt(12) and u_k the UE->AP unit vector.
FisherInfo fim_delay(const Deployment& deployment, int ue_index, const SignalModel& model,
                     std::span<const int> ap_subset = {});

// Carrier-phase information: the same geometry weighting with beta_rms
// replaced by the carrier frequency.
FisherInfo fim_phase(const Deployment& deployment, int ue_index, const SignalModel& model,
                     std::span<const int> ap_subset = {});

// sqrt(trace(J^-1)). Throws SingularGeometryError when J is rank-deficient.
PebResult peb(const FisherInfo& info);

// Geometry-only dilution factor sqrt(trace((sum_k u_k u_k^T)^-1)).
double gdop(const Deployment& deployment, int ue_index, std::span<const int> ap_subset = {});

}  // namespace dmisac
