#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ramsi/bounds.hpp"
#include "ramsi/error.hpp"
#include "ramsi/harness.hpp"

using namespace ramsi;

namespace {

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.scenario = uniform_scenario(120, 12, 2, 8, 6, 0);
  spec.m_values = {30, 50, 70};
  spec.trials = 4;
  spec.policies = {{WeightPolicy::Adaptive, 2}, {WeightPolicy::FixedL1, 0}, {WeightPolicy::FixedL1L1, 1}};
  spec.base_seed = 11;
  spec.threads = 2;
  return spec;
}

}  // namespace

TEST_CASE("policy specs") {
  CHECK(parse_policy_spec("adaptive:3") == PolicySpec{WeightPolicy::Adaptive, 3});
  CHECK(parse_policy_spec("l1") == PolicySpec{WeightPolicy::FixedL1, 0});
  CHECK(parse_policy_spec("l1l1") == PolicySpec{WeightPolicy::FixedL1L1, 1});
  CHECK(parse_policy_spec("l1l1:2") == PolicySpec{WeightPolicy::FixedL1L1, 2});
  CHECK(parse_policy_spec("adaptive:0").label() == "adaptive-J0");
  CHECK_THROWS_AS(parse_policy_spec("adaptive"), ArgumentError);
  CHECK_THROWS_AS(parse_policy_spec("adaptive:x"), ArgumentError);
  CHECK_THROWS_AS(parse_policy_spec("l1:2"), ArgumentError);
  CHECK_THROWS_AS(parse_policy_spec("l1l1:0"), ArgumentError);
  CHECK_THROWS_AS(parse_policy_spec("l2"), ArgumentError);
}

TEST_CASE("sweep validation") {
  SweepSpec spec = small_sweep();
  CHECK_NOTHROW(spec.validate());
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
  spec = small_sweep();
  spec.m_values = {50, 30};
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
  spec.m_values = {0, 30};
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
  spec.m_values = {30, 121};
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
  spec = small_sweep();
  spec.policies = {{WeightPolicy::Adaptive, 3}};
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
}

TEST_CASE("determined system succeeds for every policy") {
  SweepSpec spec;
  spec.scenario = uniform_scenario(40, 6, 1, 4, 3, 0);
  spec.m_values = {40};
  spec.trials = 1;
  spec.policies = {{WeightPolicy::Adaptive, 1}, {WeightPolicy::FixedL1, 0}, {WeightPolicy::FixedL1L1, 1}};
  spec.solver.lambda = 1e-8;
  spec.solver.rel_tol = 1e-14;
  spec.solver.max_iters = 200000;
  const SweepResult r = run_sweep(spec);
  for (const SweepPoint& p : r.points) CHECK(p.success_rate == 1.0);
}

TEST_CASE("sweep results are deterministic and well formed") {
  const SweepSpec spec = small_sweep();
  const SweepResult a = run_sweep(spec);
  SweepSpec serial = spec;
  serial.threads = 1;
  const SweepResult b = run_sweep(serial);
  CHECK(to_json(a)["results"].dump() == to_json(b)["results"].dump());
  CHECK(to_json(a)["bounds"].dump() == to_json(b)["bounds"].dump());
  CHECK(to_csv(a) == to_csv(b));

  REQUIRE(a.points.size() == 9);
  for (const SweepPoint& p : a.points) {
    CHECK(p.success_rate >= 0.0);
    CHECK(p.success_rate <= 1.0);
    const double scaled = p.success_rate * spec.trials;
    CHECK(scaled == std::round(scaled));
    CHECK(p.successes == static_cast<int>(std::round(scaled)));
  }
  CHECK(a.at(1, 2).policy == PolicySpec{WeightPolicy::FixedL1, 0});
  CHECK(a.at(1, 2).m == 70);

  // Per trial, the adaptive bound is at most the l1 reduction's.
  REQUIRE(a.bounds.size() == 3);
  for (int t = 0; t < spec.trials; ++t) {
    const auto& adaptive = a.bounds[0].per_trial[static_cast<std::size_t>(t)];
    const auto& l1 = a.bounds[1].per_trial[static_cast<std::size_t>(t)];
    REQUIRE(l1);
    CHECK(*l1 == doctest::Approx(bound_l1(120, 12)));
    if (adaptive) CHECK(*adaptive <= *l1);
  }
}

TEST_CASE("json and csv layout") {
  const SweepResult r = run_sweep(small_sweep());
  const nlohmann::json j = to_json(r);
  CHECK(j["config"]["n"] == 120);
  CHECK(j["config"]["policies"].size() == 3);
  CHECK(j["results"].size() == 9);
  CHECK(j["results"][0].contains("success_rate"));
  CHECK(j["results"][0].contains("mean_rel_error"));
  CHECK(j["results"][0].contains("mean_iters"));
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("policy,J,m,trials,successes,success_rate,mean_rel_error,mean_iters,mean_bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("quality sweep") {
  QualitySweepSpec spec;
  spec.n = 120;
  spec.s0 = 12;
  spec.num_side_info = 1;
  spec.s_values = {2, 30};
  spec.m_grid = {10, 20, 30, 40, 50, 60};
  spec.trials = 3;
  spec.policies = {{WeightPolicy::Adaptive, 1}, {WeightPolicy::FixedL1, 0}};
  spec.target_success = 1.0;
  spec.base_seed = 5;
  spec.threads = 1;
  CHECK(spec.overlap_for(2) == 2);
  CHECK(spec.overlap_for(30) == 12);
  const std::vector<QualityRow> rows = run_quality_sweep(spec);
  REQUIRE(rows.size() == 4);
  for (const QualityRow& row : rows) {
    CHECK((row.m_required == 121 || row.success_rate >= 1.0));
  }
  // Good side information needs no more measurements than plain l1.
  CHECK(rows[0].m_required <= rows[1].m_required);
  CHECK(rows[0].m_required <= rows[2].m_required + 10);

  spec.m_grid = {5};
  const std::vector<QualityRow> hopeless = run_quality_sweep(spec);
  for (const QualityRow& row : hopeless) CHECK(row.m_required == 121);

  CHECK(to_json(spec, rows)["results"].size() == 4);
  CHECK(to_csv(rows).rfind("s_j,r_j,policy,m_required,success_rate\n", 0) == 0);
}

TEST_CASE("invalid solver config is rejected before any trial") {
  SweepSpec spec = small_sweep();
  spec.solver.lipschitz_override = -1.0;
  try {
    run_sweep(spec);
    FAIL("expected ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("ipschitz") != std::string::npos);
  }
}
