#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "dmisac/keyvalue.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "dmisac_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path dir = work_dir();
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(DMISAC_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

int count_data_rows(const std::string& csv) {
  int rows = -1;  // skip header
  std::stringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  return rows;
}

const std::string kScenarioDir = DMISAC_SCENARIO_DIR;

}  // namespace

TEST_CASE("peb: row count, exact ratio column, seed column") {
  const fs::path csv_path = work_dir() / "peb.csv";
  const RunResult run = run_cli("peb --scenario " + kScenarioDir +
                                "/fig2.scenario --counts 4..12 --out " + csv_path.string());
  REQUIRE(run.exit_code == 0);
  const std::string csv = slurp(csv_path);
  CHECK(count_data_rows(csv) == 18);  // 9 counts x 2 modes
  CHECK(csv.rfind("num_aps,mode,metric,value_m,trials,seed\n", 0) == 0);

  // parse value per (count, mode) and check the ratio law row by row
  std::stringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  double delay_value = 0.0;
  const double expected = 6e6 / (std::sqrt(12.0) * 28e9);
  while (std::getline(lines, line)) {
    std::stringstream fields(line);
    std::string num_aps, mode, metric, value, trials, seed;
    std::getline(fields, num_aps, ',');
    std::getline(fields, mode, ',');
    std::getline(fields, metric, ',');
    std::getline(fields, value, ',');
    std::getline(fields, trials, ',');
    std::getline(fields, seed, ',');
    CHECK(metric == "peb");
    CHECK(seed == "7");  // scenario master seed on every row
    if (mode == "delay") {
      delay_value = std::stod(value);
    } else {
      const double ratio = std::stod(value) / delay_value;
      CHECK(std::abs(ratio / expected - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("peb: single AP exits 3 with a singular-geometry message") {
  const RunResult run = run_cli("peb --scenario " + kScenarioDir +
                                "/fig2.scenario --counts 1 --out " +
                                (work_dir() / "peb1.csv").string());
  CHECK(run.exit_code == 3);
  CHECK(run.err.find("singular") != std::string::npos);
}

TEST_CASE("rmse: zero trials exits 2") {
  const RunResult run = run_cli("rmse --scenario " + kScenarioDir +
                                "/fig2.scenario --mode delay --trials 0 --out " +
                                (work_dir() / "r0.csv").string());
  CHECK(run.exit_code == 2);
}

TEST_CASE("rmse: identical CSV bytes for any --jobs value") {
  const fs::path a = work_dir() / "rmse_j1.csv";
  const fs::path b = work_dir() / "rmse_j2.csv";
  const std::string base = "rmse --scenario " + kScenarioDir +
                           "/fig2.scenario --mode delay --counts 4,6 --trials 40";
  REQUIRE(run_cli(base + " --jobs 1 --out " + a.string()).exit_code == 0);
  REQUIRE(run_cli(base + " --jobs 2 --out " + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("scenario errors map to exit codes 2 and 4") {
  const fs::path bad = work_dir() / "bad.scenario";
  std::ofstream(bad) << "area_side_m = 100\nnum_aps = 4\nnum_ues = 1\nseed = 1\n"
                        "signal.carrier_hz = 28e9\nsignal.bandwidth_hz = 6e6\n"
                        "signal.carierr_hz = 1\n";
  const RunResult typo = run_cli("validate --scenario " + bad.string());
  CHECK(typo.exit_code == 2);
  CHECK(typo.err.find("unknown key") != std::string::npos);

  const RunResult missing = run_cli("validate --scenario /nonexistent/file.scenario");
  CHECK(missing.exit_code == 4);
}

TEST_CASE("validate prints the resolved config") {
  const RunResult run = run_cli("validate --scenario " + kScenarioDir + "/fig3.scenario");
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("scenario OK") != std::string::npos);
  CHECK(run.out.find("num_aps = 200") != std::string::npos);
  CHECK(run.out.find("channel.blockage_penalty_db = 25") != std::string::npos);
}

TEST_CASE("gdop: square layout reaches GDOP 1, orderings agree at the full set") {
  const fs::path square_csv = work_dir() / "gdop_sq.csv";
  const RunResult square = run_cli("gdop --scenario " + kScenarioDir +
                                   "/square4.scenario --ordering \"1 2 3 4\" --out " +
                                   square_csv.string());
  REQUIRE(square.exit_code == 0);
  {
    std::stringstream lines(slurp(square_csv));
    std::string line, last;
    while (std::getline(lines, line)) {
      if (!line.empty()) last = line;
    }
    std::stringstream fields(last);
    std::string label, count, gdop_value;
    std::getline(fields, label, ',');
    std::getline(fields, count, ',');
    std::getline(fields, gdop_value, ',');
    CHECK(count == "4");
    CHECK(std::stod(gdop_value) == doctest::Approx(1.0).epsilon(1e-9));
  }

  const fs::path circle_csv = work_dir() / "gdop_ci.csv";
  const RunResult circle = run_cli(
      "gdop --scenario " + kScenarioDir + "/circle10.scenario"
      " --ordering \"1 2 3 10 9 8 7 6 5 4\" --ordering \"1 7 4 10 5 2 8 3 9 6\" --out " +
      circle_csv.string());
  REQUIRE(circle.exit_code == 0);

  // index rows by (ordering, count)
  std::map<std::pair<std::string, int>, double> gdop_by;
  std::stringstream lines(slurp(circle_csv));
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::stringstream fields(line);
    std::string label, count, value;
    std::getline(fields, label, ',');
    std::getline(fields, count, ',');
    std::getline(fields, value, ',');
    gdop_by[{label, std::stoi(count)}] = std::stod(value);
  }
  // identical final sets -> identical final GDOP
  CHECK(gdop_by[{"order-1", 10}] == doctest::Approx(gdop_by[{"order-2", 10}]).epsilon(1e-12));
  // arc-shaped prefixes are strictly worse than spread prefixes
  for (int count = 3; count <= 8; ++count) {
    CHECK(gdop_by[{"order-1", count}] > gdop_by[{"order-2", count}]);
  }

  const RunResult bad = run_cli("gdop --scenario " + kScenarioDir +
                                "/circle10.scenario --ordering \"1 2 3\" --out " +
                                (work_dir() / "gdop_bad.csv").string());
  CHECK(bad.exit_code == 2);
  const RunResult dup = run_cli("gdop --scenario " + kScenarioDir +
                                "/circle10.scenario --ordering \"1 1 2 3 4 5 6 7 8 9\" --out " +
                                (work_dir() / "gdop_dup.csv").string());
  CHECK(dup.exit_code == 2);
}

TEST_CASE("se: row arithmetic and the ratio table") {
  const fs::path single_csv = work_dir() / "se_single.csv";
  const RunResult single = run_cli("se --scenario " + kScenarioDir +
                                   "/fig3.scenario --regimes without-isac --realizations 5 "
                                   "--jobs 2 --out " + single_csv.string());
  REQUIRE(single.exit_code == 0);
  CHECK(count_data_rows(slurp(single_csv)) == 9);  // 9 SNRs x 1 regime
  CHECK(single.out.find("gain over without-isac") == std::string::npos);

  const fs::path full_csv = work_dir() / "se_full.csv";
  const RunResult full = run_cli("se --scenario " + kScenarioDir +
                                 "/fig3.scenario --realizations 5 --jobs 2 --out " +
                                 full_csv.string());
  REQUIRE(full.exit_code == 0);
  const std::string csv = slurp(full_csv);
  CHECK(count_data_rows(csv) == 36);  // 9 SNRs x 4 regimes
  CHECK(csv.rfind("snr_db,regime,se_per_ue,realizations,seed\n", 0) == 0);
  CHECK(full.out.find("gain over without-isac") != std::string::npos);

  // --sum multiplies by the UE count and renames the column
  const fs::path sum_csv = work_dir() / "se_sum.csv";
  REQUIRE(run_cli("se --scenario " + kScenarioDir +
                  "/fig3.scenario --regimes without-isac --realizations 5 --sum --out " +
                  sum_csv.string())
              .exit_code == 0);
  const std::string sum_text = slurp(sum_csv);
  CHECK(sum_text.rfind("snr_db,regime,se_sum,", 0) == 0);
}

TEST_CASE("manifest replay reproduces the CSV byte for byte") {
  const fs::path first_csv = work_dir() / "replay_a.csv";
  REQUIRE(run_cli("rmse --scenario " + kScenarioDir +
                  "/fig2.scenario --mode delay --counts 4,6 --trials 25 --out " +
                  first_csv.string())
              .exit_code == 0);

  // rebuild the scenario from the manifest's config.* keys and rerun with
  // the recorded parameters
  const dmisac::KeyValueDoc manifest =
      dmisac::KeyValueDoc::load(first_csv.string() + ".manifest");
  const fs::path replay_scenario = work_dir() / "replay.scenario";
  {
    std::ofstream out(replay_scenario);
    for (const auto& entry : manifest.entries()) {
      if (entry.key.rfind("config.", 0) == 0) {
        out << entry.key.substr(7) << " = " << entry.value << "\n";
      }
    }
  }
  const std::string counts = manifest.get_string("run.counts");
  const std::string trials = manifest.get_string("run.trials");
  const std::string mode = manifest.get_string("run.mode");
  const std::string seed = manifest.get_string("run.seed");

  const fs::path second_csv = work_dir() / "replay_b.csv";
  REQUIRE(run_cli("rmse --scenario " + replay_scenario.string() + " --mode " + mode +
                  " --counts " + counts + " --trials " + trials + " --seed " + seed +
                  " --jobs 2 --out " + second_csv.string())
              .exit_code == 0);
  CHECK(slurp(first_csv) == slurp(second_csv));
}
