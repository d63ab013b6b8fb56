#pragma once

#include <cstdint>
#include <vector>

#include "ramsi/core.hpp"

namespace ramsi {

/// Counts controlling a synthetic source and its side information.
///
/// s0 is the sparsity of x. For each side information signal j, s_j is the
/// support size of x - z_j and r_j how many of those positions lie on supp(x).
struct ScenarioSpec {
  Index n = 1000;
  Index s0 = 128;
  std::vector<Index> s_j;
  std::vector<Index> r_j;
  std::uint64_t seed = 0;
  /// Standard deviation of the nonzero entries of x - z_j. The default makes
  /// ||z_j - x|| / ||x|| come out near 0.56 for (s0, s_j) = (128, 64) and
  /// near 1.12 for (128, 256).
  double difference_scale = 0.79;

  Index num_side_info() const noexcept { return static_cast<Index>(s_j.size()); }
  /// Throws ArgumentError on infeasible counts.
  void validate() const;
};

/// J identical (s_j, r_j) pairs.
ScenarioSpec uniform_scenario(Index n, Index s0, Index num_side_info, Index s_j, Index r_j,
                              std::uint64_t seed);

struct Scenario {
  SignalVector x;
  SideInformationEnsemble ensemble;
};

/// Uniform random support of size s0 with i.i.d. N(0,1) values.
SignalVector generate_source(const ScenarioSpec& spec);

/// z_j (j is 1-based) for the source `x` built from the same spec.
///
/// r_j positions of supp(x) get z_ji = x_i - g, s_j - r_j positions off the
/// support get z_ji = -g (g ~ N(0, difference_scale^2), never zero), the rest
/// of the support copies x and everything else is zero.
SignalVector generate_side_info(const SignalVector& x, const ScenarioSpec& spec, Index j);

Scenario generate_scenario(const ScenarioSpec& spec);

}  // namespace ramsi
