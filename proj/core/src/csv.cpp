#include "dmisac/csv.hpp"

#include <cmath>
#include <cstdio>

#include "dmisac/errors.hpp"
#include "dmisac/fisher.hpp"

namespace dmisac {

std::string format_double_csv(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string to_csv(const RmseCurve& curve) {
  std::string out = "num_aps,mode,metric,value_m,trials,seed\n";
  for (const auto& row : curve.rows) {
    out += std::to_string(row.num_aps);
    out += ',';
    out += to_string(row.mode);
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double_csv(row.value_m);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += std::to_string(curve.seed);
    out += '\n';
  }
  return out;
}

std::string to_csv(const SeCurve& curve, bool sum_over_ues) {
  std::string out = sum_over_ues ? "snr_db,regime,se_sum,realizations,seed\n"
                                 : "snr_db,regime,se_per_ue,realizations,seed\n";
  const double scale = sum_over_ues ? static_cast<double>(curve.num_ues) : 1.0;
  for (const auto& row : curve.rows) {
    out += format_double_csv(row.snr_db);
    out += ',';
    out += to_string(row.regime);
    out += ',';
    out += format_double_csv(row.se_per_ue * scale);
    out += ',';
    out += std::to_string(row.realizations);
    out += ',';
    out += std::to_string(curve.seed);
    out += '\n';
  }
  return out;
}

std::string to_csv(const GdopCurve& curve) {
  std::string out = "ordering,num_aps,gdop,peb_phase_m,seed\n";
  for (const auto& row : curve.rows) {
    out += row.ordering;
    out += ',';
    out += std::to_string(row.num_aps);
    out += ',';
    out += format_double_csv(row.gdop_value);
    out += ',';
    out += format_double_csv(row.peb_phase_m);
    out += ',';
    out += std::to_string(curve.seed);
    out += '\n';
  }
  return out;
}

GdopCurve gdop_sweep(const Deployment& deployment, int ue_index, const SignalModel& model,
                     const std::vector<std::vector<int>>& orderings,
                     const std::vector<std::string>& labels, std::uint64_t seed) {
  if (orderings.size() != labels.size()) {
    throw ConfigError("one label per ordering required");
  }
  const int num_aps = deployment.num_aps();
  GdopCurve curve;
  curve.seed = seed;
  for (std::size_t o = 0; o < orderings.size(); ++o) {
    const auto& ordering = orderings[o];
    if (static_cast<int>(ordering.size()) != num_aps) {
      throw ConfigError("ordering '" + labels[o] + "' must list all " +
                        std::to_string(num_aps) + " AP indices");
    }
    std::vector<bool> seen(num_aps, false);
    for (const int ap : ordering) {
      if (ap < 0 || ap >= num_aps || seen[ap]) {
        throw ConfigError("ordering '" + labels[o] + "' is not a permutation of AP indices");
      }
      seen[ap] = true;
    }
    for (int count = 1; count <= num_aps; ++count) {
      const std::span<const int> prefix(ordering.data(), static_cast<std::size_t>(count));
      GdopRow row;
      row.ordering = labels[o];
      row.num_aps = count;
      try {
        row.gdop_value = gdop(deployment, ue_index, prefix);
      } catch (const SingularGeometryError&) {
        row.gdop_value = std::numeric_limits<double>::infinity();
      }
      try {
        row.peb_phase_m = peb(fim_phase(deployment, ue_index, model, prefix)).peb_m;
      } catch (const SingularGeometryError&) {
        row.peb_phase_m = std::numeric_limits<double>::infinity();
      }
      curve.rows.push_back(std::move(row));
    }
  }
  return curve;
}

}  // namespace dmisac
