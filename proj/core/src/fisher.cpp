#include "dmisac/fisher.hpp"

#include <cmath>

#include "dmisac/errors.hpp"

namespace dmisac {

const char* to_string(PositioningMode mode) {
  return mode == PositioningMode::kDelay ? "delay" : "phase";
}

PositioningMode positioning_mode_from_string(const std::string& name) {
  if (name == "delay") return PositioningMode::kDelay;
  if (name == "phase") return PositioningMode::kPhase;
  throw ConfigError("unknown positioning mode '" + name + "' (expected delay or phase)");
}

double link_snr(const LinkGeometry& link, const SignalModel& model, int antennas) {
  const double snr0 = std::pow(10.0, model.ref_snr_db / 10.0);
  return snr0 * pathloss_gain(link.distance_m(), model) * static_cast<double>(antennas);
}

namespace {

std::vector<int> resolve_subset(const Deployment& deployment, std::span<const int> ap_subset) {
  std::vector<int> aps;
  if (ap_subset.empty()) {
    aps.resize(deployment.num_aps());
    for (int i = 0; i < deployment.num_aps(); ++i) aps[i] = i;
  } else {
    aps.assign(ap_subset.begin(), ap_subset.end());
    for (const int ap : aps) {
      if (ap < 0 || ap >= deployment.num_aps()) {
        throw ConfigError("AP subset index " + std::to_string(ap) + " out of range");
      }
    }
  }
  return aps;
}

// Shared geometry sum: J = sum_k weight_k u_k u_k^T.
FisherInfo assemble_fim(const Deployment& deployment, int ue_index, const SignalModel& model,
                        std::span<const int> ap_subset, PositioningMode mode,
                        double frequency_term_hz) {
  if (ue_index < 0 || ue_index >= deployment.num_ues()) {
    throw ConfigError("UE index out of range");
  }
  const int dims = deployment.is_3d ? 3 : 2;
  const auto aps = resolve_subset(deployment, ap_subset);

  FisherInfo out;
  out.mode = mode;
  out.info = Eigen::MatrixXd::Zero(dims, dims);
  out.ap_snrs.reserve(aps.size());

  const double scale = 8.0 * kPi * kPi * frequency_term_hz * frequency_term_hz /
                       (kSpeedOfLight * kSpeedOfLight);
  const Eigen::Vector3d ue = deployment.ue_positions[ue_index];
  for (const int ap : aps) {
    const Eigen::Vector3d diff = deployment.ap_positions[ap] - ue;
    const double dist = diff.norm();
    const double snr = link_snr(deployment.link(ap, ue_index), model, 1);
    out.ap_snrs.push_back(snr);
    const Eigen::VectorXd u = diff.head(dims) / dist;
    out.info.noalias() += (scale * snr) * (u * u.transpose());
  }
  return out;
}

}  // namespace

FisherInfo fim_delay(const Deployment& deployment, int ue_index, const SignalModel& model,
                     std::span<const int> ap_subset) {
  return assemble_fim(deployment, ue_index, model, ap_subset, PositioningMode::kDelay,
                      model.rms_bandwidth_hz());
}

FisherInfo fim_phase(const Deployment& deployment, int ue_index, const SignalModel& model,
                     std::span<const int> ap_subset) {
  return assemble_fim(deployment, ue_index, model, ap_subset, PositioningMode::kPhase,
                      model.carrier_hz);
}

namespace {

// Inverse trace via eigendecomposition, with the configured condition bound.
double inverse_trace_or_throw(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double max_ev = ev.maxCoeff();
  const double min_ev = ev.minCoeff();
  if (!(max_ev > 0.0) || min_ev <= 0.0 || max_ev / min_ev > kSingularConditionThreshold) {
    throw SingularGeometryError(std::string(what) +
                                ": information matrix is singular (rank-deficient geometry)");
  }
  return ev.cwiseInverse().sum();
}

}  // namespace

PebResult peb(const FisherInfo& info) {
  PebResult out;
  out.mode = info.mode;
  out.num_aps = static_cast<int>(info.ap_snrs.size());
  out.peb_m = std::sqrt(inverse_trace_or_throw(info.info, "peb"));
  return out;
}

double gdop(const Deployment& deployment, int ue_index, std::span<const int> ap_subset) {
  if (ue_index < 0 || ue_index >= deployment.num_ues()) {
    throw ConfigError("UE index out of range");
  }
  const int dims = deployment.is_3d ? 3 : 2;
  const auto aps = resolve_subset(deployment, ap_subset);
  if (aps.size() < 2) {
    throw SingularGeometryError("gdop: need at least 2 APs");
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dims, dims);
  const Eigen::Vector3d ue = deployment.ue_positions[ue_index];
  for (const int ap : aps) {
    const Eigen::Vector3d diff = deployment.ap_positions[ap] - ue;
    const double dist = diff.norm();
    if (!(dist > 0.0)) throw ConfigError("gdop undefined: UE co-located with AP");
    const Eigen::VectorXd u = diff.head(dims) / dist;
    g.noalias() += u * u.transpose();
  }
  return std::sqrt(inverse_trace_or_throw(g, "gdop"));
}

}  // namespace dmisac
