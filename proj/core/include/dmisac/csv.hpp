#pragma once

#include <string>

#include "dmisac/estimation.hpp"
#include "dmisac/spectral.hpp"

namespace dmisac {

// Short double formatting for CSV values ("%.12g"; "inf" for infinities).
std::string format_double_csv(double value);

// header: num_aps,mode,metric,value_m,trials,seed
std::string to_csv(const RmseCurve& curve);

// header: snr_db,regime,se_per_ue,realizations,seed
// (se_sum when `sum_over_ues`; values are then multiplied by the UE count)
std::string to_csv(const SeCurve& curve, bool sum_over_ues = false);

struct GdopRow {
  std::string ordering;
  int num_aps = 0;
  double gdop_value = 0.0;     // inf while the prefix geometry is rank-deficient
  double peb_phase_m = 0.0;
};

struct GdopCurve {
  std::vector<GdopRow> rows;
  std::uint64_t seed = 0;
};

// header: ordering,num_aps,gdop,peb_phase_m,seed
std::string to_csv(const GdopCurve& curve);

// GDOP and phase-mode PEB after each sequential AP addition, one block of
// rows per ordering. Each ordering must be a permutation of all AP indices.
GdopCurve gdop_sweep(const Deployment& deployment, int ue_index, const SignalModel& model,
                     const std::vector<std::vector<int>>& orderings,
                     const std::vector<std::string>& labels, std::uint64_t seed);

}  // namespace dmisac
