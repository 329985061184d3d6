// dmisac: desk-scale simulator for joint communication, localization and
// sensing studies in distributed-MIMO deployments.
//
// Subcommands: peb, rmse, se, gdop, validate. Every data-producing command
// writes one CSV plus a `<out>.manifest` sidecar that pins the resolved
// configuration and seed; replaying a manifest reproduces the CSV bytes.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dmisac/csv.hpp"
#include "dmisac/errors.hpp"
#include "dmisac/estimation.hpp"
#include "dmisac/fisher.hpp"
#include "dmisac/scenario.hpp"
#include "dmisac/spectral.hpp"
#include "dmisac/version.hpp"
#include "manifest.hpp"

namespace {

using dmisac::ConfigError;

struct CommonOpts {
  std::string scenario_path;
  std::optional<std::uint64_t> seed_override;
  std::string out;
  int jobs = 1;
};

dmisac::ScenarioConfig load_config(const CommonOpts& common) {
  dmisac::ScenarioConfig config = dmisac::load_scenario(common.scenario_path);
  if (common.seed_override) {
    config.seed = *common.seed_override;
  }
  return config;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// "4..12", "4..12:2" or "4,6,8"
std::vector<long long> parse_number_list(const std::string& text, const char* what) {
  std::vector<long long> out;
  const auto parse_one = [&](const std::string& token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": bad value '" + token + "'");
    }
    if (used != token.size()) {
      throw ConfigError(std::string(what) + ": bad value '" + token + "'");
    }
    return v;
  };
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    long long step = 1;
    std::string tail = text.substr(range_pos + 2);
    const auto colon = tail.find(':');
    if (colon != std::string::npos) {
      step = parse_one(tail.substr(colon + 1));
      tail = tail.substr(0, colon);
    }
    const long long lo = parse_one(text.substr(0, range_pos));
    const long long hi = parse_one(tail);
    if (step <= 0 || hi < lo) {
      throw ConfigError(std::string(what) + ": empty range '" + text + "'");
    }
    for (long long v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) out.push_back(parse_one(token));
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": no values in '" + text + "'");
  return out;
}

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> out;
  for (const long long v : parse_number_list(text, "--counts")) {
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> out;
  for (const long long v : parse_number_list(text, "--snr")) {
    out.push_back(static_cast<double>(v));
  }
  return out;
}

std::string join_numbers(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += dmisac::format_double_csv(values[i]);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dmisac::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw dmisac::IoError("write failure on '" + path + "'");
}

class Stopwatch {
 public:
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish_run(dmisac::cli::RunManifest& manifest, const std::string& out_path,
                const std::string& csv, const Stopwatch& watch) {
  write_text_file(out_path, csv);
  manifest.set_output(out_path);
  manifest.set_duration_ms(watch.elapsed_ms());
  manifest.write(out_path + ".manifest");
}

int cmd_peb(const CommonOpts& common, const std::string& counts_str, bool redraw) {
  Stopwatch watch;
  const dmisac::ScenarioConfig config = load_config(common);
  const std::vector<int> counts = parse_counts(counts_str);
  const dmisac::RmseCurve curve = dmisac::peb_sweep(config, counts, redraw);

  const std::string out_path = common.out.empty() ? "peb.csv" : common.out;
  dmisac::cli::RunManifest manifest("peb", config);
  manifest.set_param("scenario_path", common.scenario_path);
  manifest.set_param("counts", join_numbers(counts));
  manifest.set_param("redraw_per_count", redraw ? "true" : "false");
  finish_run(manifest, out_path, dmisac::to_csv(curve), watch);

  std::printf("%8s %14s %14s %14s\n", "num_aps", "delay_peb_m", "phase_peb_m", "ratio");
  for (std::size_t i = 0; i + 1 < curve.rows.size(); i += 2) {
    const auto& delay_row = curve.rows[i];
    const auto& phase_row = curve.rows[i + 1];
    std::printf("%8d %14.6g %14.6g %14.6e\n", delay_row.num_aps, delay_row.value_m,
                phase_row.value_m, phase_row.value_m / delay_row.value_m);
  }
  std::printf("wrote %s (+.manifest)\n", out_path.c_str());
  return 0;
}

int cmd_rmse(const CommonOpts& common, const std::string& mode_str,
             const std::string& counts_str, int trials, bool redraw) {
  Stopwatch watch;
  const dmisac::ScenarioConfig config = load_config(common);
  const dmisac::PositioningMode mode = dmisac::positioning_mode_from_string(mode_str);
  const std::vector<int> counts = parse_counts(counts_str);
  const dmisac::RmseCurve curve =
      dmisac::rmse_sweep(config, mode, counts, trials, resolve_jobs(common.jobs), redraw);

  const std::string out_path = common.out.empty() ? "rmse.csv" : common.out;
  dmisac::cli::RunManifest manifest("rmse", config);
  manifest.set_param("scenario_path", common.scenario_path);
  manifest.set_param("mode", mode_str);
  manifest.set_param("counts", join_numbers(counts));
  manifest.set_param_u64("trials", static_cast<std::uint64_t>(trials));
  manifest.set_param("redraw_per_count", redraw ? "true" : "false");
  finish_run(manifest, out_path, dmisac::to_csv(curve), watch);

  std::printf("%8s %14s %14s %12s\n", "num_aps", "peb_m", "rmse_m", "rmse/peb");
  for (std::size_t i = 0; i + 1 < curve.rows.size(); i += 2) {
    const auto& peb_row = curve.rows[i];
    const auto& rmse_row = curve.rows[i + 1];
    std::printf("%8d %14.6g %14.6g %12.4g\n", peb_row.num_aps, peb_row.value_m,
                rmse_row.value_m, rmse_row.value_m / peb_row.value_m);
  }
  std::printf("wrote %s (+.manifest)\n", out_path.c_str());
  return 0;
}

int cmd_se(const CommonOpts& common, const std::string& regimes_str, const std::string& snr_str,
           int realizations, bool sum_over_ues) {
  Stopwatch watch;
  const dmisac::ScenarioConfig config = load_config(common);

  std::vector<dmisac::IsacRegime> regimes;
  {
    std::stringstream stream(regimes_str);
    std::string token;
    while (std::getline(stream, token, ',')) {
      if (!token.empty()) regimes.push_back(dmisac::regime_from_string(token));
    }
  }
  if (regimes.empty()) throw ConfigError("--regimes: no regimes given");
  const std::vector<double> snr_grid = parse_snr_grid(snr_str);

  const dmisac::SeCurve curve =
      dmisac::se_sweep(config, regimes, snr_grid, realizations, resolve_jobs(common.jobs));

  const std::string out_path = common.out.empty() ? "se.csv" : common.out;
  dmisac::cli::RunManifest manifest("se", config);
  manifest.set_param("scenario_path", common.scenario_path);
  {
    std::string names;
    for (std::size_t i = 0; i < regimes.size(); ++i) {
      if (i > 0) names += ',';
      names += dmisac::to_string(regimes[i]);
    }
    manifest.set_param("regimes", names);
  }
  manifest.set_param("snr_grid_db", join_numbers(snr_grid));
  manifest.set_param_u64("realizations", static_cast<std::uint64_t>(realizations));
  manifest.set_param("sum", sum_over_ues ? "true" : "false");
  finish_run(manifest, out_path, dmisac::to_csv(curve, sum_over_ues), watch);

  // Gain summary vs. without-isac, when there is something to compare.
  const bool has_baseline =
      std::find(regimes.begin(), regimes.end(), dmisac::IsacRegime::kWithoutIsac) !=
      regimes.end();
  if (has_baseline && regimes.size() > 1) {
    std::printf("%8s", "snr_db");
    for (const auto regime : regimes) {
      if (regime != dmisac::IsacRegime::kWithoutIsac) {
        std::printf(" %18s", dmisac::to_string(regime));
      }
    }
    std::printf("   (SE gain over without-isac)\n");
    for (const double snr : snr_grid) {
      double baseline = 0.0;
      for (const auto& row : curve.rows) {
        if (row.snr_db == snr && row.regime == dmisac::IsacRegime::kWithoutIsac) {
          baseline = row.se_per_ue;
        }
      }
      std::printf("%8.4g", snr);
      for (const auto regime : regimes) {
        if (regime == dmisac::IsacRegime::kWithoutIsac) continue;
        double value = 0.0;
        for (const auto& row : curve.rows) {
          if (row.snr_db == snr && row.regime == regime) value = row.se_per_ue;
        }
        if (baseline > 0.0) {
          std::printf(" %17.3gx", value / baseline);
        } else {
          std::printf(" %18s", "n/a");
        }
      }
      std::printf("\n");
    }
  }
  std::printf("wrote %s (+.manifest)\n", out_path.c_str());
  return 0;
}

int cmd_gdop(const CommonOpts& common, const std::vector<std::string>& ordering_args) {
  Stopwatch watch;
  const dmisac::ScenarioConfig config = load_config(common);
  const dmisac::Deployment deployment = dmisac::generate_deployment(config);

  std::vector<std::vector<int>> orderings;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < ordering_args.size(); ++i) {
    std::vector<int> ordering;
    std::stringstream stream(ordering_args[i]);
    std::string token;
    while (std::getline(stream, token, ',')) {
      std::stringstream inner(token);
      std::string piece;
      while (inner >> piece) {
        int value = 0;
        try {
          value = std::stoi(piece);
        } catch (const std::exception&) {
          throw ConfigError("--ordering: bad AP index '" + piece + "'");
        }
        // CLI indices are 1-based AP numbers.
        ordering.push_back(value - 1);
      }
    }
    orderings.push_back(std::move(ordering));
    labels.push_back("order-" + std::to_string(i + 1));
  }
  if (orderings.empty()) throw ConfigError("gdop requires at least one --ordering");

  const dmisac::GdopCurve curve =
      dmisac::gdop_sweep(deployment, 0, config.signal, orderings, labels, config.seed);

  const std::string out_path = common.out.empty() ? "gdop.csv" : common.out;
  dmisac::cli::RunManifest manifest("gdop", config);
  manifest.set_param("scenario_path", common.scenario_path);
  for (std::size_t i = 0; i < ordering_args.size(); ++i) {
    manifest.set_param("ordering." + std::to_string(i + 1), ordering_args[i]);
  }
  finish_run(manifest, out_path, dmisac::to_csv(curve), watch);

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& final_row = curve.rows[(i + 1) * deployment.num_aps() - 1];
    std::printf("%s: final GDOP %.6g, final phase PEB %.6g m\n", labels[i].c_str(),
                final_row.gdop_value, final_row.peb_phase_m);
  }
  std::printf("wrote %s (+.manifest)\n", out_path.c_str());
  return 0;
}

int cmd_validate(const CommonOpts& common) {
  const dmisac::ScenarioConfig config = load_config(common);
  std::fputs(dmisac::format_scenario(config).c_str(), stdout);
  std::printf("scenario OK\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed-MIMO sensing/localization/communication simulator"};
  app.set_version_flag("--version", std::string(dmisac::kToolName) + " " + dmisac::kVersion);
  app.require_subcommand(1);

  CommonOpts common;
  const auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
    cmd->add_option("--scenario", common.scenario_path, "scenario file")->required();
    cmd->add_option("--seed", common.seed_override, "override the scenario seed");
    if (needs_out) cmd->add_option("--out", common.out, "output CSV path");
    cmd->add_option("--jobs", common.jobs, "worker threads (0 = all cores)");
  };

  // peb
  auto* peb_cmd = app.add_subcommand("peb", "position error bound vs. AP count, both modes");
  std::string counts_str = "4..12";
  bool redraw = false;
  add_common(peb_cmd);
  peb_cmd->add_option("--counts", counts_str, "AP counts, e.g. 4..12 or 4,6,8");
  peb_cmd->add_flag("--redraw-per-count", redraw, "redraw AP positions per count (default: nested)");

  // rmse
  auto* rmse_cmd = app.add_subcommand("rmse", "Monte Carlo positioning RMSE with matching PEB");
  std::string mode_str = "delay";
  int trials = 500;
  add_common(rmse_cmd);
  rmse_cmd->add_option("--mode", mode_str, "delay or phase")->required();
  rmse_cmd->add_option("--counts", counts_str, "AP counts, e.g. 4..12 or 4,6,8");
  rmse_cmd->add_option("--trials", trials, "Monte Carlo trials per count");
  rmse_cmd->add_flag("--redraw-per-count", redraw, "redraw AP positions per count");

  // se
  auto* se_cmd = app.add_subcommand("se", "uplink spectral efficiency by information regime");
  std::string regimes_str = "with-isac,with-sensing,with-localization,without-isac";
  std::string snr_str = "-10..30:5";
  int realizations = 200;
  bool sum_over_ues = false;
  add_common(se_cmd);
  se_cmd->add_option("--regimes", regimes_str, "comma-separated regime list");
  se_cmd->add_option("--snr", snr_str, "transmit SNR grid in dB, e.g. -10..30:5");
  se_cmd->add_option("--realizations", realizations, "Monte Carlo realizations");
  se_cmd->add_flag("--sum", sum_over_ues, "report summed SE instead of per-UE");

  // gdop
  auto* gdop_cmd = app.add_subcommand("gdop", "GDOP and phase PEB along AP deployment orders");
  std::vector<std::string> ordering_args;
  add_common(gdop_cmd);
  gdop_cmd->add_option("--ordering", ordering_args,
                       "1-based AP permutation, e.g. \"1 2 3 10 9 8 7 6 5 4\" (repeatable)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "load a scenario and print the resolved config");
  add_common(validate_cmd, /*needs_out=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (peb_cmd->parsed()) return cmd_peb(common, counts_str, redraw);
    if (rmse_cmd->parsed()) return cmd_rmse(common, mode_str, counts_str, trials, redraw);
    if (se_cmd->parsed()) return cmd_se(common, regimes_str, snr_str, realizations, sum_over_ues);
    if (gdop_cmd->parsed()) return cmd_gdop(common, ordering_args);
    if (validate_cmd->parsed()) return cmd_validate(common);
  } catch (const dmisac::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const dmisac::SingularGeometryError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const dmisac::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
