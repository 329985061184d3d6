#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

#include "dmisac/rng.hpp"

namespace dmisac {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// K factors at or above this value are treated as "purely line of sight":
// the draw returns the deterministic LOS component exactly.
inline constexpr double kInfiniteRicianK = 1e9;

// SNRs at or above this value are treated as noiseless.
inline constexpr double kInfiniteSnr = 1e12;

// Carrier/bandwidth/SNR description of the sounding signal.
struct SignalModel {
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  int num_subcarriers = 64;
  double ref_snr_db = 20.0;      // SNR at ref_distance_m over a clear link
  double ref_distance_m = 1.0;
  double pathloss_exponent = 2.0;

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }

  // RMS bandwidth of a flat spectrum of width B.
  double rms_bandwidth_hz() const { return bandwidth_hz / std::sqrt(12.0); }

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

// Small-scale / blockage parameters (config section `channel.*`).
struct ChannelParams {
  double rician_k_db = 10.0;
  // -inf means K = 0 (pure scattering) on blocked links.
  double rician_k_blocked_db = -std::numeric_limits<double>::infinity();
  double shadow_sigma_db = 4.0;
  double blockage_penalty_db = 25.0;

  double rician_k_linear(bool blocked) const {
    const double k_db = blocked ? rician_k_blocked_db : rician_k_db;
    if (k_db == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::pow(10.0, k_db / 10.0);
  }

  void validate() const;
};

struct LinkGeometry {
  Eigen::Vector3d ap = Eigen::Vector3d::Zero();
  Eigen::Vector3d ue = Eigen::Vector3d::Zero();

  double distance_m() const { return (ap - ue).norm(); }
  double delay_s() const { return distance_m() / kSpeedOfLight; }
};

struct LargeScaleGain {
  double gain = 1.0;         // linear power gain, shadowing and blockage folded in
  double shadow_db = 0.0;    // the individual log-normal draw
  bool blocked = false;
};

// Per-link small-scale realization; h is one complex coefficient per antenna.
struct ChannelRealization {
  Eigen::VectorXcd h;
  Eigen::VectorXcd los_mean;  // deterministic component of h (the Rician mean)
  double rician_k = 0.0;
  double gain = 0.0;          // large-scale power gain used for the draw
};

// Deterministic power-law gain (d0/d)^eta without shadowing or blockage.
// Throws ConfigError for zero distance.
double pathloss_gain(double distance_m, const SignalModel& model);

// Full large-scale gain: power law x log-normal shadowing x blockage
// penalty. The shadow draw depends only on `seed`, not on the blockage
// flag, so blocking a link can only reduce its gain.
LargeScaleGain path_gain(const LinkGeometry& link, const SignalModel& model,
                         const ChannelParams& params, bool blocked,
                         std::uint64_t seed);

// Rician draw: h = sqrt(gain) (sqrt(K/(K+1)) e^{j los_phase} 1 +
// sqrt(1/(K+1)) w), w ~ CN(0, I). E||h||^2 = gain * antennas.
ChannelRealization draw_rician_channel(double gain, double rician_k, int antennas,
                                       double los_phase_rad, std::uint64_t seed);

// Subcarrier frequency offsets spanning the signal bandwidth, endpoints
// included: f_n = -B/2 + n B/(N-1).
Eigen::VectorXd subcarrier_offsets_hz(const SignalModel& model);

// Noise-free per-subcarrier response of a clear LOS link: amplitude
// sqrt(pathloss gain), phase -2 pi (f_c + f_n) d / c.
// Throws ConfigError when the link is blocked.
Eigen::VectorXcd los_phase_response(const LinkGeometry& link, const SignalModel& model,
                                    bool blocked = false);

// Carrier phase of a LOS link wrapped to (-pi, pi].
double carrier_phase(const LinkGeometry& link, const SignalModel& model);

}  // namespace dmisac
