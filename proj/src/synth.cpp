#include "ramsi/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace ramsi {

namespace {

constexpr std::uint64_t kSourceStream = 0;

double nonzero_gaussian(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  double g = 0.0;
  while (g == 0.0) g = gauss(rng);
  return g;
}

// First `count` entries of `pool` become a uniform random subset.
void partial_shuffle(std::vector<Index>& pool, Index count, std::mt19937_64& rng) {
  for (Index a = 0; a < count; ++a) {
    std::uniform_int_distribution<Index> pick(a, static_cast<Index>(pool.size()) - 1);
    std::swap(pool[static_cast<std::size_t>(a)], pool[static_cast<std::size_t>(pick(rng))]);
  }
}

}  // namespace

void ScenarioSpec::validate() const {
  if (n < 1) throw ArgumentError("n must be positive");
  if (s0 < 1 || s0 > n) {
    throw ArgumentError("s0 must lie in 1..n (got " + std::to_string(s0) + ")");
  }
  if (s_j.size() != r_j.size()) throw ArgumentError("s_j and r_j must have the same length");
  if (!(difference_scale > 0.0)) throw ArgumentError("difference_scale must be positive");
  for (std::size_t j = 0; j < s_j.size(); ++j) {
    const std::string tag = "side information " + std::to_string(j + 1);
    if (r_j[j] < 0 || r_j[j] > std::min(s0, s_j[j])) {
      throw ArgumentError(tag + ": r_j must lie in 0..min(s0, s_j)");
    }
    if (s_j[j] - r_j[j] > n - s0) {
      throw ArgumentError(tag + ": s_j - r_j exceeds the n - s0 zero positions of x");
    }
  }
}

ScenarioSpec uniform_scenario(Index n, Index s0, Index num_side_info, Index s_j, Index r_j,
                              std::uint64_t seed) {
  ScenarioSpec spec;
  spec.n = n;
  spec.s0 = s0;
  spec.s_j.assign(static_cast<std::size_t>(std::max<Index>(num_side_info, 0)), s_j);
  spec.r_j.assign(spec.s_j.size(), r_j);
  spec.seed = seed;
  return spec;
}

SignalVector generate_source(const ScenarioSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(derive_seed(spec.seed, kSourceStream));
  std::vector<Index> pool(static_cast<std::size_t>(spec.n));
  std::iota(pool.begin(), pool.end(), Index{0});
  partial_shuffle(pool, spec.s0, rng);
  std::sort(pool.begin(), pool.begin() + spec.s0);

  Vector x = Vector::Zero(spec.n);
  for (Index a = 0; a < spec.s0; ++a) x[pool[static_cast<std::size_t>(a)]] = nonzero_gaussian(rng, 1.0);
  return SignalVector(std::move(x));
}

SignalVector generate_side_info(const SignalVector& x, const ScenarioSpec& spec, Index j) {
  spec.validate();
  if (j < 1 || j > spec.num_side_info()) {
    throw ArgumentError("side information index " + std::to_string(j) + " out of range");
  }
  if (x.size() != spec.n) throw DimensionError("source length does not match scenario n");

  std::vector<Index> support;
  std::vector<Index> zeros;
  for (Index i = 0; i < x.size(); ++i) (x[i] != 0.0 ? support : zeros).push_back(i);
  if (static_cast<Index>(support.size()) != spec.s0) {
    throw ArgumentError("source sparsity does not match scenario s0");
  }

  const Index s = spec.s_j[static_cast<std::size_t>(j - 1)];
  const Index r = spec.r_j[static_cast<std::size_t>(j - 1)];
  std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(j)));
  partial_shuffle(support, r, rng);
  partial_shuffle(zeros, s - r, rng);

  Vector z = x.values();
  for (Index a = 0; a < r; ++a) {
    const Index i = support[static_cast<std::size_t>(a)];
    // x_i - z_i must stay nonzero; rounding in the subtraction can cancel a
    // tiny draw, so redraw in that case.
    double zi = x[i];
    while (x[i] - zi == 0.0) zi = x[i] - nonzero_gaussian(rng, spec.difference_scale);
    z[i] = zi;
  }
  for (Index a = 0; a < s - r; ++a) {
    z[zeros[static_cast<std::size_t>(a)]] = -nonzero_gaussian(rng, spec.difference_scale);
  }
  return SignalVector(std::move(z));
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  SignalVector x = generate_source(spec);
  std::vector<SignalVector> signals;
  for (Index j = 1; j <= spec.num_side_info(); ++j) {
    signals.push_back(generate_side_info(x, spec, j));
  }
  return Scenario{x, SideInformationEnsemble(spec.n, std::move(signals))};
}

}  // namespace ramsi
