#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ramsi/core.hpp"
#include "ramsi/synth.hpp"
#include "ramsi/weights.hpp"

namespace ramsi {

/// A weight policy together with how many side information signals it sees.
struct PolicySpec {
  WeightPolicy policy = WeightPolicy::Adaptive;
  Index side_info_used = 0;

  /// "adaptive-J3", "l1", "l1l1".
  std::string label() const;
  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// "adaptive:3", "l1", "l1l1" (optionally "l1l1:1"). Throws ArgumentError.
PolicySpec parse_policy_spec(const std::string& text);

struct SweepSpec {
  /// Its `seed` is ignored: every trial draws fresh x, z_j and A from seeds
  /// derived from base_seed and the trial index.
  ScenarioSpec scenario;
  std::vector<Index> m_values;
  int trials = 20;
  std::vector<PolicySpec> policies;
  double success_threshold = 1e-2;
  std::uint64_t base_seed = 0;
  SolverConfig solver;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

struct SweepPoint {
  PolicySpec policy;
  Index m = 0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_rel_error = 0.0;
  double mean_iters = 0.0;
};

struct PolicyBound {
  PolicySpec policy;
  /// Mean over the trials where the bound is defined.
  std::optional<double> mean_bound;
  int defined_trials = 0;
  /// Per-trial values in trial order.
  std::vector<std::optional<double>> per_trial;
};

struct SweepResult {
  SweepSpec spec;
  /// Policy-major: points[policy_index * m_values.size() + m_index].
  std::vector<SweepPoint> points;
  std::vector<PolicyBound> bounds;

  const SweepPoint& at(std::size_t policy_index, std::size_t m_index) const;
};

/// Monte Carlo phase-transition experiment. For each trial a fresh instance
/// is drawn; each (policy, m) pair is solved on the same instance and
/// matrix, and success means relative error <= success_threshold. Errors
/// abort the sweep and are rethrown with the trial, m and policy attached.
SweepResult run_sweep(const SweepSpec& spec);

/// The instance run_sweep draws for `trial`, for computing per-trial
/// quantities (such as bounds) ahead of a sweep.
Scenario trial_scenario(const SweepSpec& spec, int trial);

/// Required-measurements experiment across side information quality.
struct QualitySweepSpec {
  Index n = 1000;
  Index s0 = 128;
  Index num_side_info = 3;
  /// s_j values (shared by every signal).
  std::vector<Index> s_values;
  /// r_j = min(s0, round(overlap_ratio * s_j)), raised if needed so that
  /// s_j - r_j fits in the zero positions of x.
  double overlap_ratio = 0.8;
  /// Ascending candidate m values.
  std::vector<Index> m_grid;
  int trials = 20;
  std::vector<PolicySpec> policies;
  double target_success = 0.98;
  double success_threshold = 1e-2;
  std::uint64_t base_seed = 0;
  SolverConfig solver;
  unsigned threads = 0;

  Index overlap_for(Index s_j) const;
  void validate() const;
};

struct QualityRow {
  Index s_j = 0;
  Index r_j = 0;
  PolicySpec policy;
  /// Smallest grid m reaching the target, or n + 1 if none does.
  Index m_required = 0;
  /// Success rate observed at m_required (or at the largest grid m).
  double success_rate = 0.0;
};

/// Binary search over m_grid for each (s_j, policy), assuming success is
/// monotone in m. The same base seed is used for every s_j so that rows
/// share their random sources.
std::vector<QualityRow> run_quality_sweep(const QualitySweepSpec& spec);

nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const QualitySweepSpec& spec, const std::vector<QualityRow>& rows);
std::string to_csv(const SweepResult& result);
std::string to_csv(const std::vector<QualityRow>& rows);

}  // namespace ramsi
