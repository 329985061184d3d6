#include "dmisac/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "dmisac/errors.hpp"
#include "dmisac/parallel.hpp"

namespace dmisac {

SearchConfig SearchConfig::for_config(const ScenarioConfig& config) {
  SearchConfig out;
  out.region_lo = Eigen::Vector2d::Zero();
  out.region_hi = Eigen::Vector2d::Constant(config.area_side_m);
  return out;
}

Measurements simulate_measurements(const Deployment& deployment, int ue_index,
                                   const SignalModel& model, PositioningMode mode,
                                   const BlockageMap* blockage, std::uint64_t seed,
                                   std::span<const int> ap_subset) {
  if (ue_index < 0 || ue_index >= deployment.num_ues()) {
    throw ConfigError("UE index out of range");
  }
  Measurements out;
  out.mode = mode;
  if (ap_subset.empty()) {
    out.ap_indices.resize(deployment.num_aps());
    for (int i = 0; i < deployment.num_aps(); ++i) out.ap_indices[i] = i;
  } else {
    out.ap_indices.assign(ap_subset.begin(), ap_subset.end());
  }
  for (const int ap : out.ap_indices) {
    if (ap < 0 || ap >= deployment.num_aps()) {
      throw ConfigError("AP subset index " + std::to_string(ap) + " out of range");
    }
    if (blockage != nullptr && blockage->is_blocked(ap, ue_index)) {
      throw ConfigError("AP " + std::to_string(ap) +
                        " is blocked for this UE; positioning assumes clear LOS");
    }
  }

  Rng rng(derive_seed(seed, SeedStream::kMeasurement, 0));
  const int k = static_cast<int>(out.ap_indices.size());
  const double beta = model.rms_bandwidth_hz();

  if (mode == PositioningMode::kDelay) {
    out.delays_s.resize(k);
    out.delay_vars_s2.resize(k);
    for (int i = 0; i < k; ++i) {
      const LinkGeometry link = deployment.link(out.ap_indices[i], ue_index);
      const double snr = link_snr(link, model);
      const double var = 1.0 / (8.0 * kPi * kPi * beta * beta * snr);
      const double sigma = snr >= kInfiniteSnr ? 0.0 : std::sqrt(var);
      out.delay_vars_s2[i] = var;
      out.delays_s[i] = link.delay_s() + rng.normal(0.0, sigma);
    }
    return out;
  }

  const int n = model.num_subcarriers;
  const Eigen::VectorXd offsets = subcarrier_offsets_hz(model);
  out.phases_rad.resize(k);
  out.phase_vars_rad2.resize(k);
  out.subcarrier_responses.resize(n, k);
  for (int i = 0; i < k; ++i) {
    const LinkGeometry link = deployment.link(out.ap_indices[i], ue_index);
    const double snr = link_snr(link, model);
    const double tau = link.delay_s();
    const bool noiseless = snr >= kInfiniteSnr;

    const double var = 1.0 / (2.0 * snr);
    out.phase_vars_rad2[i] = var;
    const double noise = noiseless ? 0.0 : rng.normal(0.0, std::sqrt(var));
    out.phases_rad[i] = wrap_angle(-2.0 * kPi * model.carrier_hz * tau + noise);

    // Per-subcarrier amplitude such that the coherent total SNR is SNR_k.
    const double amp = std::sqrt(snr / static_cast<double>(n));
    for (int r = 0; r < n; ++r) {
      const double phase = -2.0 * kPi * (model.carrier_hz + offsets[r]) * tau;
      std::complex<double> y = std::polar(amp, phase);
      if (!noiseless) y += rng.cnormal();
      out.subcarrier_responses(r, i) = y;
    }
  }
  return out;
}

namespace {

constexpr double kWeightVarFloor = 1e-30;

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

// Keeps the best `capacity` values, merging entries closer than
// `merge_radius` (cells of the same peak).
class CandidateList {
 public:
  CandidateList(int capacity, double merge_radius)
      : capacity_(capacity), merge_radius_sq_(merge_radius * merge_radius) {}

  void offer(double value, const Eigen::Vector2d& pos) {
    if (full() && value <= entries_.back().value) return;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if ((entries_[i].position - pos).squaredNorm() <= merge_radius_sq_) {
        if (value > entries_[i].value) {
          entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
          insert_sorted(value, pos);
        }
        return;
      }
    }
    if (full()) entries_.pop_back();
    insert_sorted(value, pos);
  }

  const std::vector<Candidate>& entries() const { return entries_; }

  int near_tie_count(double rel_tol) const {
    if (entries_.empty()) return 0;
    const double best = entries_.front().value;
    const double tol = rel_tol * std::max(1.0, std::abs(best));
    int count = 0;
    for (const auto& c : entries_) {
      if (best - c.value <= tol) ++count;
    }
    return count;
  }

 private:
  bool full() const { return static_cast<int>(entries_.size()) >= capacity_; }

  void insert_sorted(double value, const Eigen::Vector2d& pos) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                               [](const Candidate& c, double v) { return c.value > v; });
    entries_.insert(it, Candidate{value, pos});
  }

  int capacity_;
  double merge_radius_sq_;
  std::vector<Candidate> entries_;
};

// --- weighted least squares on range targets (delay ML, phase coarse) ------

struct RangeProblem {
  std::vector<Eigen::Vector2d> aps;
  std::vector<double> target_m;   // c * tau_hat
  std::vector<double> weight;     // 1 / (c^2 sigma_tau^2)
};

double range_cost(const RangeProblem& problem, const Eigen::Vector2d& p) {
  double cost = 0.0;
  for (std::size_t i = 0; i < problem.aps.size(); ++i) {
    const double r = problem.target_m[i] - (p - problem.aps[i]).norm();
    cost += problem.weight[i] * r * r;
  }
  return cost;
}

struct LocalFit {
  Eigen::Vector2d position;
  double objective = 0.0;  // maximized
  bool converged = false;
};

// Damped Gauss-Newton descent on the weighted range SSE.
LocalFit refine_range(const RangeProblem& problem, Eigen::Vector2d p, int max_iterations,
                      double step_tol) {
  double cost = range_cost(problem, p);
  double lambda = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < problem.aps.size(); ++i) {
      const Eigen::Vector2d diff = p - problem.aps[i];
      const double dist = diff.norm();
      if (!(dist > 0.0)) continue;
      const Eigen::Vector2d u = diff / dist;
      const double r = problem.target_m[i] - dist;
      // Gauss-Newton normal equations with J_i = -u_i: rhs = -J^T W r.
      g += problem.weight[i] * r * u;
      h.noalias() += problem.weight[i] * (u * u.transpose());
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Eigen::Matrix2d damped = h + lambda * Eigen::Matrix2d::Identity() * h.trace();
      const Eigen::Vector2d step = damped.ldlt().solve(g);
      const Eigen::Vector2d trial = p + step;
      const double trial_cost = range_cost(problem, trial);
      if (trial_cost <= cost) {
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (step.norm() < step_tol) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted || converged) break;
  }
  return LocalFit{p, -0.5 * cost, converged};
}

struct GridOutcome {
  CandidateList candidates;
  bool any = false;
};

// Rectangular coarse scan of the range SSE.
GridOutcome scan_range_grid(const RangeProblem& problem, const Eigen::Vector2d& lo,
                            const Eigen::Vector2d& hi, double step, int capacity) {
  GridOutcome out{CandidateList(capacity, 2.0 * step), false};
  const int nx = std::max(1, static_cast<int>(std::floor((hi.x() - lo.x()) / step)) + 1);
  const int ny = std::max(1, static_cast<int>(std::floor((hi.y() - lo.y()) / step)) + 1);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = std::min(lo.y() + iy * step, hi.y());
    for (int ix = 0; ix < nx; ++ix) {
      const double x = std::min(lo.x() + ix * step, hi.x());
      const Eigen::Vector2d p(x, y);
      out.candidates.offer(-range_cost(problem, p), p);
      out.any = true;
    }
  }
  return out;
}

// --- phase likelihood --------------------------------------------------------

struct PhaseProblem {
  std::vector<Eigen::Vector2d> aps;
  std::vector<double> phase_rad;  // measured, wrapped
  std::vector<double> weight;     // 1 / sigma_phi^2
  double rad_per_m = 0.0;         // 2 pi f_c / c
};

double phase_likelihood(const PhaseProblem& problem, const Eigen::Vector2d& p) {
  double value = 0.0;
  for (std::size_t i = 0; i < problem.aps.size(); ++i) {
    const double theta =
        problem.phase_rad[i] + problem.rad_per_m * (p - problem.aps[i]).norm();
    value += problem.weight[i] * std::cos(theta);
  }
  return value;
}

// Damped ascent with the Fisher surrogate Hessian.
LocalFit refine_phase(const PhaseProblem& problem, Eigen::Vector2d p, int max_iterations,
                      double step_tol) {
  double value = phase_likelihood(problem, p);
  double lambda = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < problem.aps.size(); ++i) {
      const Eigen::Vector2d diff = p - problem.aps[i];
      const double dist = diff.norm();
      if (!(dist > 0.0)) continue;
      const Eigen::Vector2d u = diff / dist;
      const double theta = problem.phase_rad[i] + problem.rad_per_m * dist;
      g += (-problem.weight[i] * std::sin(theta) * problem.rad_per_m) * u;
      h.noalias() +=
          (problem.weight[i] * problem.rad_per_m * problem.rad_per_m) * (u * u.transpose());
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Eigen::Matrix2d damped = h + lambda * Eigen::Matrix2d::Identity() * h.trace();
      const Eigen::Vector2d step = damped.ldlt().solve(g);
      const Eigen::Vector2d trial = p + step;
      const double trial_value = phase_likelihood(problem, trial);
      if (trial_value >= value) {
        p = trial;
        value = trial_value;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (step.norm() < step_tol) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted || converged) break;
  }
  return LocalFit{p, value, converged};
}

// Single-precision evaluation of the phase likelihood over a disc-shaped
// grid. Polynomial cosine keeps the loop auto-vectorizable; candidates are
// re-evaluated in double precision during refinement.
void scan_phase_grid(const PhaseProblem& problem, const Eigen::Vector2d& center,
                     double radius, double step, const Eigen::Vector2d& lo,
                     const Eigen::Vector2d& hi, CandidateList& candidates) {
  // cos(2 pi f), f in [-0.5, 0.5]; max error ~1.1e-8.
  constexpr float kC0 = 0.9999999890590217f;
  constexpr float kC2 = -19.739204499453955f;
  constexpr float kC4 = 64.93911745989769f;
  constexpr float kC6 = -85.45013953091194f;
  constexpr float kC8 = 60.167630951117495f;
  constexpr float kC10 = -25.967599248888707f;
  constexpr float kC12 = 6.528658161648292f;

  const int k = static_cast<int>(problem.aps.size());
  const double cycles_per_m = problem.rad_per_m / (2.0 * kPi);
  std::vector<float> ax(k), ay(k), ck(k), w(k);
  for (int i = 0; i < k; ++i) {
    ax[i] = static_cast<float>(problem.aps[i].x());
    ay[i] = static_cast<float>(problem.aps[i].y());
    // measured phase in cycles, in (-0.5, 0.5]
    ck[i] = static_cast<float>(problem.phase_rad[i] / (2.0 * kPi));
    w[i] = static_cast<float>(problem.weight[i]);
  }
  const float kap = static_cast<float>(cycles_per_m);

  const double y_min = std::max(lo.y(), center.y() - radius);
  const double y_max = std::min(hi.y(), center.y() + radius);
  const int ny = static_cast<int>(std::floor((y_max - y_min) / step)) + 1;

  std::vector<float> xs;
  std::vector<float> acc;
  for (int iy = 0; iy < ny; ++iy) {
    const double y = y_min + iy * step;
    const double dy_c = y - center.y();
    const double half_sq = radius * radius - dy_c * dy_c;
    if (half_sq <= 0.0) continue;
    const double half = std::sqrt(half_sq);
    const double x_min = std::max(lo.x(), center.x() - half);
    const double x_max = std::min(hi.x(), center.x() + half);
    if (x_max < x_min) continue;
    const int nx = static_cast<int>(std::floor((x_max - x_min) / step)) + 1;

    xs.resize(nx);
    acc.assign(nx, 0.0f);
    for (int ix = 0; ix < nx; ++ix) xs[ix] = static_cast<float>(x_min + ix * step);

    const float yf = static_cast<float>(y);
    for (int i = 0; i < k; ++i) {
      const float dy = yf - ay[i];
      const float dy2 = dy * dy;
      const float axi = ax[i];
      const float cki = ck[i];
      const float wi = w[i];
      float* acc_ptr = acc.data();
      const float* xs_ptr = xs.data();
      for (int ix = 0; ix < nx; ++ix) {
        const float dx = xs_ptr[ix] - axi;
        const float d = std::sqrt(dx * dx + dy2);
        const float t = cki + kap * d;  // cycles, >= -0.5
        const int n_cyc = static_cast<int>(t + 0.5f);
        const float f = t - static_cast<float>(n_cyc);
        const float f2 = f * f;
        const float c =
            kC0 + f2 * (kC2 + f2 * (kC4 + f2 * (kC6 + f2 * (kC8 + f2 * (kC10 + f2 * kC12)))));
        acc_ptr[ix] += wi * c;
      }
    }
    for (int ix = 0; ix < nx; ++ix) {
      candidates.offer(static_cast<double>(acc[ix]), Eigen::Vector2d(xs[ix], y));
    }
  }
}

EstimateResult estimate_delay(const Measurements& measurements, const Deployment& deployment,
                              const SearchConfig& search) {
  RangeProblem problem;
  const int k = static_cast<int>(measurements.ap_indices.size());
  problem.aps.reserve(k);
  problem.target_m.reserve(k);
  problem.weight.reserve(k);
  for (int i = 0; i < k; ++i) {
    const auto& ap = deployment.ap_positions[measurements.ap_indices[i]];
    problem.aps.emplace_back(ap.x(), ap.y());
    problem.target_m.push_back(kSpeedOfLight * measurements.delays_s[i]);
    const double var = std::max(measurements.delay_vars_s2[i], kWeightVarFloor);
    problem.weight.push_back(1.0 / (kSpeedOfLight * kSpeedOfLight * var));
  }

  GridOutcome grid = scan_range_grid(problem, search.region_lo, search.region_hi,
                                     search.coarse_step_m, search.refine_candidates);
  if (!grid.any) throw ConfigError("empty search region");

  EstimateResult result;
  result.grid_candidates = grid.candidates.near_tie_count(search.candidate_rel_tol);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& cand : grid.candidates.entries()) {
    const LocalFit fit =
        refine_range(problem, cand.position, search.max_iterations, search.step_tol_m);
    if (fit.objective > best) {
      best = fit.objective;
      result.position = fit.position;
      result.log_likelihood = fit.objective;
      result.converged = fit.converged;
    }
  }
  return result;
}

// Coarse per-AP delay via matched filtering of the subcarrier responses.
double coarse_delay_s(const Eigen::VectorXcd& response, const Eigen::VectorXd& offsets_hz,
                      double tau_lo, double tau_hi, double bandwidth_hz) {
  const double step = 1.0 / (8.0 * bandwidth_hz);
  const int n_tau = std::max(2, static_cast<int>(std::ceil((tau_hi - tau_lo) / step)) + 1);
  const int n = static_cast<int>(response.size());

  double best_power = -1.0;
  int best_idx = 0;
  std::vector<double> powers(n_tau);
  for (int t = 0; t < n_tau; ++t) {
    const double tau = tau_lo + t * step;
    std::complex<double> s{0.0, 0.0};
    for (int r = 0; r < n; ++r) {
      s += response[r] * std::polar(1.0, 2.0 * kPi * offsets_hz[r] * tau);
    }
    powers[t] = std::norm(s);
    if (powers[t] > best_power) {
      best_power = powers[t];
      best_idx = t;
    }
  }
  double tau_hat = tau_lo + best_idx * step;
  if (best_idx > 0 && best_idx + 1 < n_tau) {
    // three-point parabolic peak interpolation
    const double ym = powers[best_idx - 1];
    const double y0 = powers[best_idx];
    const double yp = powers[best_idx + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double delta = 0.5 * (ym - yp) / denom;
      tau_hat += std::clamp(delta, -0.5, 0.5) * step;
    }
  }
  return tau_hat;
}

EstimateResult estimate_phase(const Measurements& measurements, const Deployment& deployment,
                              const SignalModel& model, const SearchConfig& search) {
  const int k = static_cast<int>(measurements.ap_indices.size());
  const Eigen::VectorXd offsets = subcarrier_offsets_hz(model);

  // Stage 1: coarse delays -> coarse position (uniform-weight range fit).
  RangeProblem coarse;
  coarse.aps.reserve(k);
  for (int i = 0; i < k; ++i) {
    const auto& ap3 = deployment.ap_positions[measurements.ap_indices[i]];
    const Eigen::Vector2d ap(ap3.x(), ap3.y());
    coarse.aps.push_back(ap);
    // Delay bounds from the search rectangle as seen from this AP.
    const double dx = std::max({search.region_lo.x() - ap.x(), ap.x() - search.region_hi.x(), 0.0});
    const double dy = std::max({search.region_lo.y() - ap.y(), ap.y() - search.region_hi.y(), 0.0});
    const double d_min = std::hypot(dx, dy);
    double d_max = 0.0;
    for (const double cx : {search.region_lo.x(), search.region_hi.x()}) {
      for (const double cy : {search.region_lo.y(), search.region_hi.y()}) {
        d_max = std::max(d_max, std::hypot(cx - ap.x(), cy - ap.y()));
      }
    }
    const double tau = coarse_delay_s(measurements.subcarrier_responses.col(i), offsets,
                                      d_min / kSpeedOfLight, d_max / kSpeedOfLight,
                                      model.bandwidth_hz);
    coarse.target_m.push_back(kSpeedOfLight * tau);
    coarse.weight.push_back(1.0);
  }
  GridOutcome coarse_grid = scan_range_grid(coarse, search.region_lo, search.region_hi,
                                            search.coarse_step_m, 4);
  if (!coarse_grid.any) throw ConfigError("empty search region");
  LocalFit gate_fit = refine_range(coarse, coarse_grid.candidates.entries().front().position,
                                   search.max_iterations, 1e-6);
  const Eigen::Vector2d gate_center = gate_fit.position;

  // Gate radius from the delay-information PEB evaluated at the coarse fix.
  const double beta = model.rms_bandwidth_hz();
  const double delay_scale = 8.0 * kPi * kPi * beta * beta / (kSpeedOfLight * kSpeedOfLight);
  Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d diff = gate_center - coarse.aps[i];
    const double dist = std::max(diff.norm(), 1e-6);
    const Eigen::Vector2d u = diff / dist;
    const double snr = std::pow(10.0, model.ref_snr_db / 10.0) *
                       std::pow(model.ref_distance_m / dist, model.pathloss_exponent);
    info.noalias() += (delay_scale * snr) * (u * u.transpose());
  }
  const double cap =
      search.gate_radius_cap_m > 0.0
          ? search.gate_radius_cap_m
          : 3.0 * kSpeedOfLight / model.bandwidth_hz;
  double radius = cap;
  {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(info);
    const double min_ev = solver.eigenvalues().minCoeff();
    const double max_ev = solver.eigenvalues().maxCoeff();
    if (min_ev > 0.0 && max_ev / min_ev < kSingularConditionThreshold) {
      const double peb0 = std::sqrt(solver.eigenvalues().cwiseInverse().sum());
      radius = std::min(cap, std::max(search.gate_kappa * peb0, search.gate_floor_m));
    }
  }

  // Stage 2: lambda/4 grid over the gate, then local refinement of the
  // leading peaks.
  PhaseProblem problem;
  problem.aps = coarse.aps;
  problem.rad_per_m = 2.0 * kPi * model.carrier_hz / kSpeedOfLight;
  problem.phase_rad = measurements.phases_rad;
  problem.weight.resize(k);
  for (int i = 0; i < k; ++i) {
    problem.weight[i] = 1.0 / std::max(measurements.phase_vars_rad2[i], kWeightVarFloor);
  }

  const double step = search.phase_grid_step_wavelengths * model.wavelength_m();
  CandidateList candidates(search.refine_candidates, 1.25 * step);
  scan_phase_grid(problem, gate_center, radius, step, search.region_lo, search.region_hi,
                  candidates);
  if (candidates.entries().empty()) {
    // Gate degenerated to nothing (clamped away by the region); fall back to
    // the gate center itself.
    const LocalFit fit = refine_phase(problem, gate_center, search.max_iterations,
                                      search.step_tol_m);
    return EstimateResult{fit.position, fit.objective, fit.converged, 0};
  }

  EstimateResult result;
  result.grid_candidates = candidates.near_tie_count(search.candidate_rel_tol);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates.entries()) {
    const LocalFit fit =
        refine_phase(problem, cand.position, search.max_iterations, search.step_tol_m);
    if (fit.objective > best) {
      best = fit.objective;
      result.position = fit.position;
      result.log_likelihood = fit.objective;
      result.converged = fit.converged;
    }
  }
  return result;
}

}  // namespace

EstimateResult ml_estimate(const Measurements& measurements, const Deployment& deployment,
                           const SignalModel& model, const SearchConfig& search) {
  if (deployment.is_3d) {
    throw ConfigError("ML estimation is implemented for 2-D deployments");
  }
  if (measurements.ap_indices.empty()) {
    throw ConfigError("no measurements to estimate from");
  }
  if (!(search.region_hi.x() > search.region_lo.x()) ||
      !(search.region_hi.y() > search.region_lo.y())) {
    throw ConfigError("search region is empty");
  }
  for (const int ap : measurements.ap_indices) {
    if (ap < 0 || ap >= deployment.num_aps()) {
      throw ConfigError("measurement references AP index out of range");
    }
  }
  if (measurements.mode == PositioningMode::kDelay) {
    return estimate_delay(measurements, deployment, search);
  }
  return estimate_phase(measurements, deployment, model, search);
}

namespace {

std::vector<int> prefix_subset(int count) {
  std::vector<int> subset(count);
  for (int i = 0; i < count; ++i) subset[i] = i;
  return subset;
}

void check_counts(const ScenarioConfig& config, std::span<const int> ap_counts) {
  if (ap_counts.empty()) throw ConfigError("AP count list is empty");
  for (const int count : ap_counts) {
    if (count < 1) throw ConfigError("AP counts must be >= 1");
    if (count > config.num_aps) {
      throw ConfigError("AP count " + std::to_string(count) + " exceeds num_aps (" +
                        std::to_string(config.num_aps) + ")");
    }
  }
}

Deployment deployment_for_count(const ScenarioConfig& config, int count,
                                bool redraw_per_count) {
  if (!redraw_per_count) return generate_deployment(config);
  ScenarioConfig redrawn = config;
  redrawn.seed = derive_seed(config.seed, SeedStream::kDeployment, static_cast<std::uint64_t>(count));
  return generate_deployment(redrawn);
}

}  // namespace

RmseCurve rmse_sweep(const ScenarioConfig& config, PositioningMode mode,
                     std::span<const int> ap_counts, int trials, int jobs,
                     bool redraw_per_count) {
  config.validate();
  check_counts(config, ap_counts);
  if (trials < 1) throw ConfigError("trials must be >= 1");

  RmseCurve curve;
  curve.seed = config.seed;
  const Deployment nested = generate_deployment(config);
  const SearchConfig search = SearchConfig::for_config(config);

  for (const int count : ap_counts) {
    const Deployment deployment =
        redraw_per_count ? deployment_for_count(config, count, true) : nested;
    const std::vector<int> subset = prefix_subset(count);
    const FisherInfo info = mode == PositioningMode::kDelay
                                ? fim_delay(deployment, 0, config.signal, subset)
                                : fim_phase(deployment, 0, config.signal, subset);
    const PebResult bound = peb(info);

    const Eigen::Vector3d truth3 = deployment.ue_positions[0];
    const Eigen::Vector2d truth(truth3.x(), truth3.y());
    const std::uint64_t count_seed =
        derive_seed(config.seed, SeedStream::kMeasurement, static_cast<std::uint64_t>(count));

    std::vector<double> squared_error(trials, 0.0);
    parallel_for(trials, jobs, [&](int trial) {
      const std::uint64_t trial_seed =
          derive_seed(count_seed, SeedStream::kMeasurement, static_cast<std::uint64_t>(trial));
      const Measurements meas = simulate_measurements(deployment, 0, config.signal, mode,
                                                      nullptr, trial_seed, subset);
      const EstimateResult est = ml_estimate(meas, deployment, config.signal, search);
      squared_error[trial] = (est.position - truth).squaredNorm();
    });

    double sum_sq = 0.0;
    for (const double e : squared_error) sum_sq += e;  // fixed reduction order
    const double rmse = std::sqrt(sum_sq / trials);

    curve.rows.push_back(RmseRow{count, mode, "peb", bound.peb_m, 0});
    curve.rows.push_back(RmseRow{count, mode, "rmse", rmse, trials});
  }
  return curve;
}

RmseCurve peb_sweep(const ScenarioConfig& config, std::span<const int> ap_counts,
                    bool redraw_per_count) {
  config.validate();
  check_counts(config, ap_counts);

  RmseCurve curve;
  curve.seed = config.seed;
  const Deployment nested = generate_deployment(config);
  for (const int count : ap_counts) {
    const Deployment deployment =
        redraw_per_count ? deployment_for_count(config, count, true) : nested;
    const std::vector<int> subset = prefix_subset(count);
    for (const PositioningMode mode : {PositioningMode::kDelay, PositioningMode::kPhase}) {
      const FisherInfo info = mode == PositioningMode::kDelay
                                  ? fim_delay(deployment, 0, config.signal, subset)
                                  : fim_phase(deployment, 0, config.signal, subset);
      const PebResult bound = peb(info);
      curve.rows.push_back(RmseRow{count, mode, "peb", bound.peb_m, 0});
    }
  }
  return curve;
}

}  // namespace dmisac
