#include "dmisac/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "dmisac/errors.hpp"
#include "dmisac/parallel.hpp"

namespace dmisac {

bool regime_knows_blockage(IsacRegime regime) {
  return regime == IsacRegime::kWithIsac || regime == IsacRegime::kWithSensing;
}

bool regime_knows_csi(IsacRegime regime) {
  return regime == IsacRegime::kWithIsac || regime == IsacRegime::kWithLocalization;
}

const char* to_string(IsacRegime regime) {
  switch (regime) {
    case IsacRegime::kWithIsac: return "with-isac";
    case IsacRegime::kWithLocalization: return "with-localization";
    case IsacRegime::kWithSensing: return "with-sensing";
    case IsacRegime::kWithoutIsac: return "without-isac";
  }
  return "?";
}

IsacRegime regime_from_string(const std::string& name) {
  if (name == "with-isac") return IsacRegime::kWithIsac;
  if (name == "with-localization") return IsacRegime::kWithLocalization;
  if (name == "with-sensing") return IsacRegime::kWithSensing;
  if (name == "without-isac") return IsacRegime::kWithoutIsac;
  throw ConfigError("unknown regime '" + name + "'");
}

ServingAssignment assign_clusters(const Deployment& deployment, const BlockageMap& blockage,
                                  int cluster_size, AssignmentKind kind) {
  if (cluster_size < 1) throw ConfigError("cluster size L must be >= 1");
  const int num_aps = deployment.num_aps();
  const int num_ues = deployment.num_ues();
  if (blockage.num_aps() != num_aps || blockage.num_ues() != num_ues) {
    throw ConfigError("blockage map dimensions do not match the deployment");
  }

  ServingAssignment out;
  out.kind = kind;
  out.serving_aps.resize(num_ues);

  std::vector<std::pair<double, int>> ranked;
  for (int ue = 0; ue < num_ues; ++ue) {
    ranked.clear();
    for (int ap = 0; ap < num_aps; ++ap) {
      if (kind == AssignmentKind::kBackup && blockage.is_blocked(ap, ue)) continue;
      ranked.emplace_back((deployment.ap_positions[ap] - deployment.ue_positions[ue]).norm(),
                          ap);
    }
    if (ranked.empty()) {
      throw ConfigError("UE " + std::to_string(ue) + " has no unblocked AP to serve it");
    }
    std::sort(ranked.begin(), ranked.end());  // ties break toward lower AP index
    const int take = std::min<int>(cluster_size, static_cast<int>(ranked.size()));
    if (take < cluster_size) out.shortfall = true;
    auto& serving = out.serving_aps[ue];
    serving.reserve(take);
    for (int i = 0; i < take; ++i) serving.push_back(ranked[i].second);
  }
  return out;
}

Eigen::VectorXcd csi_view(const ChannelRealization& truth, CsiQuality quality) {
  return quality == CsiQuality::kPerfect ? truth.h : truth.los_mean;
}

std::vector<double> mrc_sinr_se(const Eigen::MatrixXcd& channels,
                                const Eigen::MatrixXcd& views,
                                const ServingAssignment& assignment, int antennas_per_ap,
                                double tx_snr) {
  if (channels.rows() != views.rows() || channels.cols() != views.cols()) {
    throw ConfigError("channel and view matrices must have identical shape");
  }
  const int num_ues = static_cast<int>(channels.cols());
  if (static_cast<int>(assignment.serving_aps.size()) != num_ues) {
    throw ConfigError("assignment does not cover every UE");
  }
  if (antennas_per_ap < 1) throw ConfigError("antennas_per_ap must be >= 1");
  if (!(tx_snr > 0.0)) throw ConfigError("tx_snr must be > 0");

  std::vector<double> se(num_ues, 0.0);
  for (int i = 0; i < num_ues; ++i) {
    // The combiner lives on UE i's serving antennas only; everything else
    // is structurally zero, so sums run over the serving set directly.
    const auto& serving = assignment.serving_aps[i];
    double v_norm_sq = 0.0;
    std::complex<double> signal{0.0, 0.0};
    for (const int ap : serving) {
      for (int m = 0; m < antennas_per_ap; ++m) {
        const int row = ap * antennas_per_ap + m;
        const std::complex<double> v = views(row, i);
        v_norm_sq += std::norm(v);
        signal += std::conj(v) * channels(row, i);
      }
    }
    if (v_norm_sq == 0.0) {
      se[i] = 0.0;  // no usable combiner
      continue;
    }
    double interference = 0.0;
    for (int j = 0; j < num_ues; ++j) {
      if (j == i) continue;
      std::complex<double> cross{0.0, 0.0};
      for (const int ap : serving) {
        for (int m = 0; m < antennas_per_ap; ++m) {
          const int row = ap * antennas_per_ap + m;
          cross += std::conj(views(row, i)) * channels(row, j);
        }
      }
      interference += std::norm(cross);
    }
    const double sinr =
        tx_snr * std::norm(signal) / (tx_snr * interference + v_norm_sq);
    se[i] = std::log2(1.0 + sinr);
  }
  return se;
}

SeCurve se_sweep(const ScenarioConfig& config, std::span<const IsacRegime> regimes,
                 std::span<const double> snr_grid_db, int realizations, int jobs) {
  config.validate();
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (regimes.empty()) throw ConfigError("regime list is empty");
  if (snr_grid_db.empty()) throw ConfigError("SNR grid is empty");

  const int num_regimes = static_cast<int>(regimes.size());
  const int num_snrs = static_cast<int>(snr_grid_db.size());
  const int antennas = config.antennas_per_ap;
  const int cluster_size = config.effective_cluster_size();

  // APs are fixed across realizations; UE positions, shadowing and fading
  // are redrawn per realization.
  const Deployment base = generate_deployment(config);
  const int num_aps = base.num_aps();
  const int num_ues = config.num_ues;
  const int rows_per_real = num_snrs * num_regimes;

  std::vector<double> accum(static_cast<std::size_t>(realizations) * rows_per_real, 0.0);

  parallel_for(realizations, jobs, [&](int real) {
    const std::uint64_t seed_r =
        derive_seed(config.seed, SeedStream::kUePlacement, static_cast<std::uint64_t>(real));

    Deployment deployment = base;
    Rng placement(seed_r);
    for (int ue = 0; ue < num_ues; ++ue) {
      const double x = placement.uniform(0.0, config.area_side_m);
      const double y = placement.uniform(0.0, config.area_side_m);
      const double z = config.use_3d ? placement.uniform(0.0, config.area_side_m) : 0.0;
      deployment.ue_positions[ue] = Eigen::Vector3d(x, y, z);
    }

    const ServingAssignment default_assignment = assign_clusters(
        deployment, BlockageMap::all_clear(num_aps, num_ues), cluster_size,
        AssignmentKind::kDefault);
    const BlockageMap blockage =
        apply_blockage(deployment, config.blockage, config.channel.blockage_penalty_db,
                       &default_assignment.serving_aps, seed_r);
    const ServingAssignment backup_assignment =
        assign_clusters(deployment, blockage, cluster_size, AssignmentKind::kBackup);

    Eigen::MatrixXcd channels(num_aps * antennas, num_ues);
    Eigen::MatrixXcd statistical(num_aps * antennas, num_ues);
    for (int ap = 0; ap < num_aps; ++ap) {
      for (int ue = 0; ue < num_ues; ++ue) {
        const std::uint64_t link_index =
            static_cast<std::uint64_t>(ap) * num_ues + static_cast<std::uint64_t>(ue);
        const LinkGeometry link = deployment.link(ap, ue);
        const bool blocked = blockage.is_blocked(ap, ue);
        const LargeScaleGain gain =
            path_gain(link, config.signal, config.channel, blocked,
                      derive_seed(seed_r, SeedStream::kShadow, link_index));
        const ChannelRealization realization = draw_rician_channel(
            gain.gain, config.channel.rician_k_linear(blocked), antennas,
            carrier_phase(link, config.signal),
            derive_seed(seed_r, SeedStream::kFading, link_index));
        channels.block(ap * antennas, ue, antennas, 1) = realization.h;
        statistical.block(ap * antennas, ue, antennas, 1) = realization.los_mean;
      }
    }

    double* slot = accum.data() + static_cast<std::size_t>(real) * rows_per_real;
    for (int s = 0; s < num_snrs; ++s) {
      const double tx_snr = std::pow(10.0, snr_grid_db[s] / 10.0);
      for (int r = 0; r < num_regimes; ++r) {
        const IsacRegime regime = regimes[r];
        const ServingAssignment& assignment =
            regime_knows_blockage(regime) ? backup_assignment : default_assignment;
        const Eigen::MatrixXcd& views =
            regime_knows_csi(regime) ? channels : statistical;
        const std::vector<double> se =
            mrc_sinr_se(channels, views, assignment, antennas, tx_snr);
        double mean = 0.0;
        for (const double v : se) mean += v;
        slot[s * num_regimes + r] = mean / num_ues;
      }
    }
  });

  SeCurve curve;
  curve.seed = config.seed;
  curve.num_ues = num_ues;
  curve.rows.reserve(rows_per_real);
  for (int s = 0; s < num_snrs; ++s) {
    for (int r = 0; r < num_regimes; ++r) {
      double mean = 0.0;
      for (int real = 0; real < realizations; ++real) {  // fixed reduction order
        mean += accum[static_cast<std::size_t>(real) * rows_per_real + s * num_regimes + r];
      }
      curve.rows.push_back(SeRow{snr_grid_db[s], regimes[r], mean / realizations, realizations});
    }
  }
  return curve;
}

}  // namespace dmisac
