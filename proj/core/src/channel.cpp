#include "dmisac/channel.hpp"

#include <cmath>

#include "dmisac/errors.hpp"

namespace dmisac {

void SignalModel::validate() const {
  if (!(carrier_hz > 0.0)) throw ConfigError("signal.carrier_hz must be > 0");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("signal.bandwidth_hz must be > 0");
  if (!(carrier_hz > bandwidth_hz)) {
    throw ConfigError("signal.carrier_hz must exceed signal.bandwidth_hz");
  }
  if (num_subcarriers < 2) throw ConfigError("signal.num_subcarriers must be >= 2");
  if (!(ref_distance_m > 0.0)) throw ConfigError("signal.ref_distance_m must be > 0");
  if (!(pathloss_exponent >= 0.0)) throw ConfigError("signal.pathloss_exponent must be >= 0");
}

void ChannelParams::validate() const {
  if (!(shadow_sigma_db >= 0.0)) throw ConfigError("channel.shadow_sigma_db must be >= 0");
  if (!(blockage_penalty_db >= 0.0)) {
    throw ConfigError("channel.blockage_penalty_db must be >= 0");
  }
}

double pathloss_gain(double distance_m, const SignalModel& model) {
  if (!(distance_m > 0.0)) {
    throw ConfigError("path gain undefined at zero distance (UE co-located with AP)");
  }
  return std::pow(model.ref_distance_m / distance_m, model.pathloss_exponent);
}

LargeScaleGain path_gain(const LinkGeometry& link, const SignalModel& model,
                         const ChannelParams& params, bool blocked,
                         std::uint64_t seed) {
  LargeScaleGain out;
  out.blocked = blocked;
  Rng rng(seed);
  out.shadow_db = params.shadow_sigma_db > 0.0 ? rng.normal(0.0, params.shadow_sigma_db) : 0.0;
  double gain_db = 10.0 * std::log10(pathloss_gain(link.distance_m(), model)) + out.shadow_db;
  if (blocked) gain_db -= params.blockage_penalty_db;
  out.gain = std::pow(10.0, gain_db / 10.0);
  return out;
}

ChannelRealization draw_rician_channel(double gain, double rician_k, int antennas,
                                       double los_phase_rad, std::uint64_t seed) {
  if (!(rician_k >= 0.0)) throw ConfigError("Rician K factor must be >= 0");
  if (antennas < 1) throw ConfigError("antenna count must be >= 1");
  if (!(gain >= 0.0)) throw ConfigError("channel gain must be >= 0");

  ChannelRealization out;
  out.rician_k = rician_k;
  out.gain = gain;

  const std::complex<double> los_phasor = std::polar(1.0, los_phase_rad);
  const double amp = std::sqrt(gain);

  if (rician_k >= kInfiniteRicianK) {
    out.los_mean = Eigen::VectorXcd::Constant(antennas, amp * los_phasor);
    out.h = out.los_mean;
    return out;
  }

  const double los_scale = amp * std::sqrt(rician_k / (rician_k + 1.0));
  const double scatter_scale = amp * std::sqrt(1.0 / (rician_k + 1.0));
  out.los_mean = Eigen::VectorXcd::Constant(antennas, los_scale * los_phasor);
  out.h.resize(antennas);
  Rng rng(seed);
  for (int m = 0; m < antennas; ++m) {
    out.h[m] = out.los_mean[m] + scatter_scale * rng.cnormal();
  }
  return out;
}

Eigen::VectorXd subcarrier_offsets_hz(const SignalModel& model) {
  const int n = model.num_subcarriers;
  Eigen::VectorXd offsets(n);
  const double step = model.bandwidth_hz / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    offsets[i] = -0.5 * model.bandwidth_hz + step * static_cast<double>(i);
  }
  return offsets;
}

Eigen::VectorXcd los_phase_response(const LinkGeometry& link, const SignalModel& model,
                                    bool blocked) {
  if (blocked) {
    throw ConfigError("LOS phase response requested for a blocked link");
  }
  const double tau = link.delay_s();
  const double amp = std::sqrt(pathloss_gain(link.distance_m(), model));
  const Eigen::VectorXd offsets = subcarrier_offsets_hz(model);
  Eigen::VectorXcd response(offsets.size());
  for (Eigen::Index i = 0; i < offsets.size(); ++i) {
    const double phase = -2.0 * kPi * (model.carrier_hz + offsets[i]) * tau;
    response[i] = std::polar(amp, phase);
  }
  return response;
}

double carrier_phase(const LinkGeometry& link, const SignalModel& model) {
  return wrap_angle(-2.0 * kPi * model.carrier_hz * link.delay_s());
}

}  // namespace dmisac
