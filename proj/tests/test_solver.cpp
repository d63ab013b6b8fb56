#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ramsi/error.hpp"
#include "ramsi/prox.hpp"
#include "ramsi/solver.hpp"
#include "ramsi/synth.hpp"

using namespace ramsi;

namespace {

SignalVector sparse_signal(std::mt19937_64& rng, Index n, Index s) {
  std::normal_distribution<double> g;
  Vector x = Vector::Zero(n);
  for (Index k = 0; k < s; ++k) x[static_cast<Index>(rng() % static_cast<std::uint64_t>(n))] = g(rng);
  return SignalVector(x);
}

// z equal to x except for `errors` perturbed entries.
SignalVector noisy_copy(std::mt19937_64& rng, const SignalVector& x, Index errors) {
  std::normal_distribution<double> g;
  Vector z = x.values();
  for (Index k = 0; k < errors; ++k) z[static_cast<Index>(rng() % static_cast<std::uint64_t>(z.size()))] += g(rng);
  return SignalVector(z);
}

}  // namespace

TEST_CASE("zero measurements are a fixed point") {
  const SensingMatrix a = generate_sensing_matrix(1, 10, 30);
  const SideInformationEnsemble ens(30, {SignalVector::zeros(30), SignalVector::zeros(30)});
  for (auto policy : {WeightPolicy::Adaptive, WeightPolicy::FixedL1, WeightPolicy::FixedL1L1}) {
    const RecoveryResult r = recover(MeasurementVector::zeros(10), a, ens, SolverConfig{}, policy);
    CHECK(r.x.values().isZero(0.0));
    CHECK(r.trace.iterations == 1);
    CHECK(r.trace.converged);
  }
}

TEST_CASE("objective") {
  const SensingMatrix a = generate_sensing_matrix(2, 3, 4);
  const SideInformationEnsemble zeros(4, {SignalVector::zeros(4)});
  CHECK(objective(SignalVector::zeros(4), MeasurementVector::zeros(3), a, zeros,
                  WeightSet::l1l1(1, 4), 0.3) == 0.0);

  std::mt19937_64 rng(4);
  const SignalVector x = sparse_signal(rng, 4, 3);
  const SideInformationEnsemble exact(4, {x});
  const MeasurementVector y = apply(a, x);
  Eigen::MatrixXd wm(2, 4);
  wm << 1e-13, 1e-13, 1e-13, 1e-13, 1 - 1e-13, 1 - 1e-13, 1 - 1e-13, 1 - 1e-13;
  // Only the z_0 term survives, at weight 1e-13.
  CHECK(objective(x, y, a, exact, WeightSet(wm), 1.0) ==
        doctest::Approx(1e-13 * x.values().lpNorm<1>()).epsilon(1e-6));

  // Hand expansion on a random point.
  Vector pv(4);
  pv << 0.3, -1.2, 0.0, 2.0;
  const SignalVector p(pv);
  const WeightSet w = update_weights(x, exact, 0.1);
  const Vector r = a.entries() * pv - y.values();
  double expected = 0.5 * r.dot(r);
  for (Index i = 0; i < 4; ++i) {
    expected += 0.7 * (w(0, i) * std::abs(pv[i]) + w(1, i) * std::abs(pv[i] - x[i]));
  }
  CHECK(objective(p, y, a, exact, w, 0.7) == doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(objective(SignalVector::zeros(3), y, a, exact, w, 0.7), DimensionError);
}

TEST_CASE("determined square system is recovered by every policy") {
  const Index n = 12;
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SensingMatrix a = generate_sensing_matrix(seed, n, n);
    const SignalVector x = sparse_signal(rng, n, 4);
    const MeasurementVector y = apply(a, x);
    const Vector direct = a.entries().fullPivLu().solve(y.values());
    REQUIRE((direct - x.values()).norm() <= 1e-9 * x.values().norm());

    const SideInformationEnsemble ens(n, {noisy_copy(rng, x, 3), noisy_copy(rng, x, 6)});
    SolverConfig cfg;
    cfg.lambda = 1e-8;
    cfg.rel_tol = 1e-15;
    cfg.max_iters = 200000;
    for (auto policy : {WeightPolicy::Adaptive, WeightPolicy::FixedL1, WeightPolicy::FixedL1L1}) {
      const RecoveryResult r = recover(y, a, ens, cfg, policy);
      CHECK(relative_error(r.x, SignalVector(direct)) <= 1e-4);
    }
  }
}

TEST_CASE("fixed l1 policy reproduces textbook FISTA") {
  std::mt19937_64 rng(31);
  const Index n = 80, m = 40;
  const SensingMatrix a = generate_sensing_matrix(77, m, n);
  const SignalVector x = sparse_signal(rng, n, 8);
  const MeasurementVector y = apply(a, x);
  SolverConfig cfg;
  cfg.lambda = 1e-2;
  cfg.rel_tol = 1e-300;
  cfg.max_iters = 300;
  cfg.lipschitz_override = lipschitz_constant(a);

  const Vector ref = oracle::fista_l1(a.entries(), y.values(), cfg.lambda, *cfg.lipschitz_override, 300);
  const RecoveryResult plain = recover(y, a, SideInformationEnsemble(n), cfg, WeightPolicy::FixedL1);
  REQUIRE(plain.trace.iterations == 300);
  CHECK((plain.x.values() - ref).cwiseAbs().maxCoeff() <= 1e-10);

  // Side information is ignored up to the positivity slack.
  const SideInformationEnsemble ens(n, {noisy_copy(rng, x, 5), noisy_copy(rng, x, 5)});
  const RecoveryResult with_si = recover(y, a, ens, cfg, WeightPolicy::FixedL1);
  CHECK((with_si.x.values() - ref).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("l1-l1 solution is a prox fixed point") {
  std::mt19937_64 rng(41);
  const Index n = 60, m = 30;
  const SensingMatrix a = generate_sensing_matrix(5, m, n);
  const SignalVector x = sparse_signal(rng, n, 6);
  const SideInformationEnsemble ens(n, {noisy_copy(rng, x, 3)});
  const MeasurementVector y = apply(a, x);
  SolverConfig cfg;
  cfg.lambda = 1e-3;
  cfg.rel_tol = 1e-16;
  cfg.max_iters = 100000;
  const double lip = lipschitz_constant(a);
  cfg.lipschitz_override = lip;
  const RecoveryResult r = recover(y, a, ens, cfg, WeightPolicy::FixedL1L1);

  const Vector grad = a.entries().transpose() * (a.entries() * r.x.values() - y.values());
  const SignalVector stepped(Vector(r.x.values() - grad / lip));
  const SignalVector again = prox_vector(stepped, ens, WeightSet::l1l1(1, n), cfg.lambda / lip);
  CHECK((again.values() - r.x.values()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("trace invariants and determinism") {
  const ScenarioSpec spec = uniform_scenario(200, 20, 2, 10, 8, 99);
  const Scenario s = generate_scenario(spec);
  const SensingMatrix a = generate_sensing_matrix(3, 70, 200);
  const MeasurementVector y = apply(a, s.x);
  SolverConfig cfg;
  const RecoveryResult r1 = recover(y, a, s.ensemble, cfg, WeightPolicy::Adaptive);
  const RecoveryResult r2 = recover(y, a, s.ensemble, cfg, WeightPolicy::Adaptive);
  CHECK(r1.x == r2.x);
  CHECK(r1.trace.objective_history == r2.trace.objective_history);
  CHECK(r1.trace.objective_history.size() == static_cast<std::size_t>(r1.trace.iterations));
  for (double h : r1.trace.objective_history) {
    REQUIRE(std::isfinite(h));
    REQUIRE(h >= 0.0);
  }
  if (r1.trace.converged) CHECK(r1.trace.final_relative_change < cfg.rel_tol);
  CHECK(relative_error(r1.x, s.x) <= 1e-2);
}

TEST_CASE("solver argument checks") {
  const SensingMatrix a = generate_sensing_matrix(1, 5, 10);
  const SideInformationEnsemble ens(10);
  CHECK_THROWS_AS(recover(MeasurementVector::zeros(4), a, ens, SolverConfig{}, WeightPolicy::FixedL1),
                  DimensionError);
  CHECK_THROWS_AS(recover(MeasurementVector::zeros(5), a, SideInformationEnsemble(9), SolverConfig{},
                          WeightPolicy::FixedL1),
                  DimensionError);
  CHECK_THROWS_AS(recover(MeasurementVector::zeros(5), a, ens, SolverConfig{}, WeightPolicy::FixedL1L1),
                  ArgumentError);
  SolverConfig bad;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(recover(MeasurementVector::zeros(5), a, ens, bad, WeightPolicy::FixedL1), ArgumentError);
}

TEST_CASE("adaptive recovery at desk scale" * doctest::timeout(600)) {
  // n=1000, s0=128, three signals with s_j=64, r_j=51, m=400.
  int successes = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Scenario s = generate_scenario(uniform_scenario(1000, 128, 3, 64, 51, derive_seed(500, trial)));
    const SensingMatrix a = generate_sensing_matrix(derive_seed(600, trial), 400, 1000);
    const RecoveryResult r = recover(apply(a, s.x), a, s.ensemble, SolverConfig{}, WeightPolicy::Adaptive);
    if (relative_error(r.x, s.x) <= 1e-2) ++successes;
  }
  CHECK(successes >= 18);
}
