#include <doctest.h>

#include <set>

#include "dmisac/errors.hpp"
#include "dmisac/keyvalue.hpp"
#include "dmisac/scenario.hpp"
#include "test_util.hpp"

using namespace dmisac;

namespace {

const char* kMinimalScenario =
    "area_side_m = 1000\n"
    "num_aps = 200\n"
    "num_ues = 5\n"
    "seed = 42\n"
    "signal.carrier_hz = 28e9\n"
    "signal.bandwidth_hz = 6e6\n";

}  // namespace

TEST_CASE("key=value parser basics") {
  const auto doc = KeyValueDoc::parse("a = 1\n# comment\n\nb.c = hello # trailing\n", "t");
  CHECK(doc.get_int("a") == 1);
  CHECK(doc.get_string("b.c") == "hello");
  CHECK_FALSE(doc.contains("missing"));

  CHECK_THROWS_AS(KeyValueDoc::parse("novalue\n", "t"), ConfigError);
  CHECK_THROWS_AS(KeyValueDoc::parse("a = 1\na = 2\n", "t"), ConfigError);
  try {
    KeyValueDoc::parse("a = 1\nbroken line\n", "t");
    FAIL("expected throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("t:2") != std::string::npos);  // line number
  }
}

TEST_CASE("typed getters reject malformed values") {
  const auto doc = KeyValueDoc::parse("x = abc\nn = 1.5\nu = -3\n", "t");
  CHECK_THROWS_AS(doc.get_double("x"), ConfigError);
  CHECK_THROWS_AS(doc.get_int("n"), ConfigError);
  CHECK_THROWS_AS(doc.get_u64("u"), ConfigError);
  CHECK_THROWS_AS(doc.get_double("nope"), ConfigError);
}

TEST_CASE("minimal scenario gets documented defaults") {
  const ScenarioConfig config = parse_scenario(kMinimalScenario, "minimal");
  CHECK(config.antennas_per_ap == 1);
  CHECK(config.deployment_kind == DeploymentKind::kUniformSquare);
  CHECK_FALSE(config.use_3d);
  CHECK(config.effective_cluster_size() == 5);
  CHECK(config.signal.num_subcarriers == 64);
  CHECK(config.signal.ref_snr_db == 20.0);
  CHECK(config.signal.ref_distance_m == 1.0);
  CHECK(config.signal.pathloss_exponent == 2.0);
  CHECK(config.channel.rician_k_db == 10.0);
  CHECK(config.channel.rician_k_linear(true) == 0.0);  // blocked default: K = 0
  CHECK(config.channel.shadow_sigma_db == 4.0);
  CHECK(config.channel.blockage_penalty_db == 25.0);
  CHECK(config.blockage.kind == BlockageKind::kNone);
}

TEST_CASE("unknown keys are rejected with their line") {
  const std::string text = std::string(kMinimalScenario) + "signal.carier_hz = 1\n";
  try {
    parse_scenario(text, "typo");
    FAIL("expected throw");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("unknown key") != std::string::npos);
    CHECK(what.find("signal.carier_hz") != std::string::npos);
    CHECK(what.find("typo:7") != std::string::npos);
  }
}

TEST_CASE("invariant violations name the field") {
  const std::string text =
      "area_side_m = 1000\nnum_aps = 200\nnum_ues = 5\nseed = 1\n"
      "cluster_size_L = 300\nsignal.carrier_hz = 28e9\nsignal.bandwidth_hz = 6e6\n";
  try {
    parse_scenario(text, "bad");
    FAIL("expected throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cluster_size_L") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_scenario("num_aps = 1\nnum_ues = 1\nseed = 0\narea_side_m = 0\n"
                                 "signal.carrier_hz = 1e9\nsignal.bandwidth_hz = 1e6\n",
                                 "zero-area"),
                  ConfigError);
  // missing required key names it
  try {
    parse_scenario("area_side_m = 10\nnum_aps = 1\nnum_ues = 1\nseed = 0\n"
                   "signal.bandwidth_hz = 1e6\n",
                   "missing");
    FAIL("expected throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("signal.carrier_hz") != std::string::npos);
  }
}

TEST_CASE("scenario round trip is lossless") {
  ScenarioConfig config = parse_scenario(kMinimalScenario, "min");
  config.channel.rician_k_blocked_db = -15.0;
  config.blockage.kind = BlockageKind::kRandomLinks;
  config.blockage.probability = 0.25;
  const ScenarioConfig reloaded = parse_scenario(format_scenario(config), "round");
  CHECK(reloaded.area_side_m == config.area_side_m);
  CHECK(reloaded.seed == config.seed);
  CHECK(reloaded.signal.carrier_hz == config.signal.carrier_hz);
  CHECK(reloaded.channel.rician_k_blocked_db == config.channel.rician_k_blocked_db);
  CHECK(reloaded.blockage.kind == config.blockage.kind);
  CHECK(reloaded.blockage.probability == config.blockage.probability);
  // -inf blocked K survives the trip too
  const ScenarioConfig defaults = parse_scenario(kMinimalScenario, "min");
  const ScenarioConfig defaults2 = parse_scenario(format_scenario(defaults), "round2");
  CHECK(defaults2.channel.rician_k_linear(true) == 0.0);
}

TEST_CASE("uniform-square deployment: bounds, count, determinism") {
  ScenarioConfig config = test::minimal_config(200, 5, 1000.0);
  config.seed = 42;
  const Deployment dep = generate_deployment(config);
  CHECK(dep.num_aps() == 200);
  CHECK(dep.num_ues() == 5);
  for (const auto& p : dep.ap_positions) {
    CHECK(p.x() >= 0.0);
    CHECK(p.x() <= 1000.0);
    CHECK(p.y() >= 0.0);
    CHECK(p.y() <= 1000.0);
    CHECK(p.z() == 0.0);
  }

  config.seed = 7;
  const Deployment a = generate_deployment(config);
  const Deployment b = generate_deployment(config);
  REQUIRE(a.num_aps() == b.num_aps());
  for (int i = 0; i < a.num_aps(); ++i) {
    CHECK(a.ap_positions[i] == b.ap_positions[i]);  // bit-identical
  }
  for (int i = 0; i < a.num_ues(); ++i) {
    CHECK(a.ue_positions[i] == b.ue_positions[i]);
  }
}

TEST_CASE("explicit-list deployment echoes the list and validates") {
  ScenarioConfig config = test::minimal_config(1, 1, 100.0);
  config.deployment_kind = DeploymentKind::kExplicitList;
  config.explicit_aps = {Eigen::Vector3d(0, 0, 0)};
  config.explicit_ues = {Eigen::Vector3d(10, 0, 0)};
  const Deployment dep = generate_deployment(config);
  CHECK(dep.ap_positions[0] == Eigen::Vector3d(0, 0, 0));
  CHECK(dep.ue_positions[0] == Eigen::Vector3d(10, 0, 0));

  config.explicit_aps.emplace_back(5, 5, 0);  // now 2 APs but num_aps = 1
  CHECK_THROWS_AS(generate_deployment(config), ConfigError);

  config.num_aps = 2;
  config.explicit_aps[1] = Eigen::Vector3d(200, 0, 0);  // outside the area
  CHECK_THROWS_AS(generate_deployment(config), ConfigError);
  config.allow_outside_area = true;
  CHECK_NOTHROW(generate_deployment(config));
}

TEST_CASE("duplicate APs are rejected at 1e-6 m") {
  ScenarioConfig config = test::minimal_config(2, 1, 100.0);
  config.deployment_kind = DeploymentKind::kExplicitList;
  config.explicit_ues = {Eigen::Vector3d(50, 50, 0)};
  config.explicit_aps = {Eigen::Vector3d(10, 10, 0), Eigen::Vector3d(10, 10 + 1e-7, 0)};
  CHECK_THROWS_AS(generate_deployment(config), ConfigError);
  config.explicit_aps[1] = Eigen::Vector3d(10, 10 + 1e-3, 0);
  CHECK_NOTHROW(generate_deployment(config));
}

TEST_CASE("circle deployment places APs on the inscribed circle") {
  ScenarioConfig config = test::minimal_config(8, 3, 100.0);
  config.deployment_kind = DeploymentKind::kCircle;
  const Deployment dep = generate_deployment(config);
  const Eigen::Vector3d center(50, 50, 0);
  for (const auto& ap : dep.ap_positions) {
    CHECK((ap - center).norm() == doctest::Approx(50.0).epsilon(1e-12));
  }
  for (const auto& ue : dep.ue_positions) {
    CHECK((ue - center).norm() <= 50.0);
  }
}

TEST_CASE("deployment CSV serialization is a fixed point") {
  ScenarioConfig config = test::minimal_config(17, 3, 250.0);
  config.seed = 1234;
  const Deployment dep = generate_deployment(config);
  const std::string csv1 = format_deployment_csv(dep);
  const Deployment reloaded = parse_deployment_csv(csv1, "mem");
  const std::string csv2 = format_deployment_csv(reloaded);
  CHECK(csv1 == csv2);
  REQUIRE(reloaded.num_aps() == dep.num_aps());
  for (int i = 0; i < dep.num_aps(); ++i) {
    CHECK(reloaded.ap_positions[i] == dep.ap_positions[i]);  // exact after text trip
  }
  CHECK(csv1.rfind("kind,index,x_m,y_m\n", 0) == 0);
}

TEST_CASE("blockage: none, default sets, random links") {
  ScenarioConfig config = test::minimal_config(40, 5, 500.0);
  const Deployment dep = generate_deployment(config);

  BlockageSpec none;
  const BlockageMap clear = apply_blockage(dep, none, 25.0, nullptr, 1);
  CHECK(clear.count_blocked() == 0);

  // default serving sets of size 5 -> exactly 25 blocked links, and a link is
  // blocked iff it belongs to some UE's set
  std::vector<std::vector<int>> sets(5);
  for (int ue = 0; ue < 5; ++ue) {
    for (int i = 0; i < 5; ++i) sets[ue].push_back((ue * 7 + i * 3) % 40);
  }
  BlockageSpec def;
  def.kind = BlockageKind::kDefaultServingSet;
  const BlockageMap blocked = apply_blockage(dep, def, 25.0, &sets, 1);
  int expected = 0;
  for (int ap = 0; ap < 40; ++ap) {
    for (int ue = 0; ue < 5; ++ue) {
      bool member = false;
      for (const int s : sets[ue]) member = member || (s == ap);
      CHECK(blocked.is_blocked(ap, ue) == member);
      expected += member ? 1 : 0;
    }
  }
  CHECK(expected == 25);
  CHECK(blocked.count_blocked() == 25);
  CHECK(blocked.penalty_db() == 25.0);

  CHECK_THROWS_AS(apply_blockage(dep, def, 25.0, nullptr, 1), ConfigError);

  BlockageSpec random;
  random.kind = BlockageKind::kRandomLinks;
  random.probability = 1.0;
  CHECK(apply_blockage(dep, random, 10.0, nullptr, 1).count_blocked() == 40 * 5);
  random.probability = 0.0;
  CHECK(apply_blockage(dep, random, 10.0, nullptr, 1).count_blocked() == 0);
  random.probability = 1.5;
  CHECK_THROWS_AS(apply_blockage(dep, random, 10.0, nullptr, 1), ConfigError);
  random.probability = 0.5;
  CHECK_THROWS_AS(apply_blockage(dep, random, -1.0, nullptr, 1), ConfigError);
}

TEST_CASE("shipped scenarios load and match their documented shape") {
  const std::string dir = DMISAC_SCENARIO_DIR;
  const ScenarioConfig fig2 = load_scenario(dir + "/fig2.scenario");
  CHECK(fig2.num_aps == 14);
  CHECK(fig2.num_ues == 1);
  CHECK(fig2.signal.carrier_hz == 28e9);
  CHECK(fig2.signal.bandwidth_hz == 6e6);
  CHECK(fig2.blockage.kind == BlockageKind::kNone);

  const ScenarioConfig fig3 = load_scenario(dir + "/fig3.scenario");
  CHECK(fig3.area_side_m == 1000.0);
  CHECK(fig3.num_aps == 200);
  CHECK(fig3.num_ues == 5);
  CHECK(fig3.effective_cluster_size() == 5);
  CHECK(fig3.blockage.kind == BlockageKind::kDefaultServingSet);
  CHECK(fig3.channel.blockage_penalty_db == 25.0);

  const ScenarioConfig square = load_scenario(dir + "/square4.scenario");
  CHECK(square.explicit_aps.size() == 4);
  const ScenarioConfig circle = load_scenario(dir + "/circle10.scenario");
  CHECK(circle.explicit_aps.size() == 10);
}
