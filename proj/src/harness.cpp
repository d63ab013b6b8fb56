#include "ramsi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ramsi/bounds.hpp"
#include "ramsi/io.hpp"
#include "ramsi/solver.hpp"

namespace ramsi {

namespace {

constexpr std::uint64_t kScenarioStream = 1;
constexpr std::uint64_t kMatrixStreamBase = 0x10000;

struct TrialOutcome {
  // [policy][m]
  std::vector<std::vector<double>> rel_error;
  std::vector<std::vector<int>> iterations;
  std::vector<std::optional<double>> bound;
};

// Runs body(t) for t in [0, count) on a small pool. The first exception stops
// the remaining work and is rethrown with the context string of its item.
template <class Body>
void parallel_for(int count, unsigned threads, Body body) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(count, 1)));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (int t = next++; t < count && !failed; t = next++) {
      try {
        body(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const DimensionError& e) {
    throw DimensionError(context + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(context + e.what());
  } catch (const NumericError& e) {
    throw NumericError(context + e.what(), e.last_estimate());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(context + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(context + e.what());
  }
}

std::uint64_t trial_seed_for(const SweepSpec& spec, int trial) {
  return derive_seed(spec.base_seed, static_cast<std::uint64_t>(trial));
}

Scenario draw_instance(const SweepSpec& spec, int trial) {
  ScenarioSpec scenario = spec.scenario;
  scenario.seed = derive_seed(trial_seed_for(spec, trial), kScenarioStream);
  return generate_scenario(scenario);
}

TrialOutcome run_trial(const SweepSpec& spec, int trial) {
  const std::uint64_t trial_seed = trial_seed_for(spec, trial);
  const Scenario instance = draw_instance(spec, trial);
  const ScenarioSpec& scenario = spec.scenario;

  TrialOutcome out;
  out.rel_error.assign(spec.policies.size(), std::vector<double>(spec.m_values.size()));
  out.iterations.assign(spec.policies.size(), std::vector<int>(spec.m_values.size()));

  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    const PolicySpec& policy = spec.policies[p];
    const SideInformationEnsemble used = instance.ensemble.truncated(policy.side_info_used);
    try {
      out.bound.push_back(
          bound_nl1(instance.x, used, policy.policy, spec.solver.epsilon).m_bound);
    } catch (...) {
      rethrow_with_context("trial " + std::to_string(trial) + ", bound for " + policy.label() +
                           ": ");
    }
  }

  for (std::size_t k = 0; k < spec.m_values.size(); ++k) {
    const Index m = spec.m_values[k];
    const SensingMatrix a = generate_sensing_matrix(
        derive_seed(trial_seed, kMatrixStreamBase + static_cast<std::uint64_t>(m)), m,
        scenario.n);
    const MeasurementVector y = apply(a, instance.x);
    SolverConfig config = spec.solver;
    if (!config.lipschitz_override) config.lipschitz_override = lipschitz_constant(a);

    for (std::size_t p = 0; p < spec.policies.size(); ++p) {
      const PolicySpec& policy = spec.policies[p];
      try {
        const RecoveryResult result =
            recover(y, a, instance.ensemble.truncated(policy.side_info_used), config,
                    policy.policy);
        out.rel_error[p][k] = relative_error(result.x, instance.x);
        out.iterations[p][k] = result.trace.iterations;
      } catch (...) {
        rethrow_with_context("trial " + std::to_string(trial) + ", m=" + std::to_string(m) +
                             ", " + policy.label() + ": ");
      }
    }
  }
  return out;
}

std::string csv_number(double v) { return format_double(v); }

}  // namespace

std::string PolicySpec::label() const {
  switch (policy) {
    case WeightPolicy::Adaptive: return "adaptive-J" + std::to_string(side_info_used);
    case WeightPolicy::FixedL1: return "l1";
    case WeightPolicy::FixedL1L1: return "l1l1";
  }
  return "unknown";
}

PolicySpec parse_policy_spec(const std::string& text) {
  const auto colon = text.find(':');
  PolicySpec spec;
  spec.policy = parse_weight_policy(text.substr(0, colon));
  switch (spec.policy) {
    case WeightPolicy::FixedL1: spec.side_info_used = 0; break;
    case WeightPolicy::FixedL1L1: spec.side_info_used = 1; break;
    case WeightPolicy::Adaptive: spec.side_info_used = -1; break;
  }
  if (colon != std::string::npos) {
    const std::string count = text.substr(colon + 1);
    std::size_t used = 0;
    long value = -1;
    try {
      value = std::stol(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || value < 0) {
      throw ArgumentError("bad side information count in policy '" + text + "'");
    }
    if (spec.policy == WeightPolicy::FixedL1 && value != 0) {
      throw ArgumentError("policy l1 uses no side information");
    }
    if (spec.policy == WeightPolicy::FixedL1L1 && value < 1) {
      throw ArgumentError("policy l1l1 needs at least one side information signal");
    }
    spec.side_info_used = value;
  }
  if (spec.side_info_used < 0) {
    throw ArgumentError("adaptive policy needs a side information count, e.g. adaptive:3");
  }
  return spec;
}

void SweepSpec::validate() const {
  scenario.validate();
  solver.validate();
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  if (m_values.empty()) throw ArgumentError("sweep needs at least one m value");
  if (!std::is_sorted(m_values.begin(), m_values.end())) {
    throw ArgumentError("m values must be sorted ascending");
  }
  if (m_values.front() < 1 || m_values.back() > scenario.n) {
    throw ArgumentError("m values must lie in 1..n");
  }
  if (policies.empty()) throw ArgumentError("sweep needs at least one policy");
  for (const PolicySpec& p : policies) {
    if (p.side_info_used > scenario.num_side_info()) {
      throw ArgumentError("policy " + p.label() + " uses more side information than generated");
    }
    if (p.policy == WeightPolicy::FixedL1L1 && p.side_info_used < 1) {
      throw ArgumentError("policy l1l1 needs at least one side information signal");
    }
  }
  if (!(success_threshold > 0.0)) throw ArgumentError("success threshold must be positive");
}

const SweepPoint& SweepResult::at(std::size_t policy_index, std::size_t m_index) const {
  return points.at(policy_index * spec.m_values.size() + m_index);
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));
  parallel_for(spec.trials, spec.threads, [&](int t) {
    outcomes[static_cast<std::size_t>(t)] = run_trial(spec, t);
  });

  // Aggregate in trial order so the sums do not depend on scheduling.
  SweepResult result;
  result.spec = spec;
  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    for (std::size_t k = 0; k < spec.m_values.size(); ++k) {
      SweepPoint point;
      point.policy = spec.policies[p];
      point.m = spec.m_values[k];
      point.trials = spec.trials;
      double err_sum = 0.0;
      double iter_sum = 0.0;
      for (const TrialOutcome& o : outcomes) {
        const double err = o.rel_error[p][k];
        if (err <= spec.success_threshold) ++point.successes;
        err_sum += err;
        iter_sum += o.iterations[p][k];
      }
      point.success_rate = static_cast<double>(point.successes) / spec.trials;
      point.mean_rel_error = err_sum / spec.trials;
      point.mean_iters = iter_sum / spec.trials;
      result.points.push_back(point);
    }
    PolicyBound bound;
    bound.policy = spec.policies[p];
    double sum = 0.0;
    for (const TrialOutcome& o : outcomes) {
      bound.per_trial.push_back(o.bound[p]);
      if (o.bound[p]) {
        sum += *o.bound[p];
        ++bound.defined_trials;
      }
    }
    if (bound.defined_trials > 0) bound.mean_bound = sum / bound.defined_trials;
    result.bounds.push_back(std::move(bound));
  }
  return result;
}

Scenario trial_scenario(const SweepSpec& spec, int trial) {
  spec.scenario.validate();
  if (trial < 0) throw ArgumentError("trial index must be non-negative");
  return draw_instance(spec, trial);
}

Index QualitySweepSpec::overlap_for(Index s_j) const {
  Index r = static_cast<Index>(std::llround(overlap_ratio * static_cast<double>(s_j)));
  r = std::min({r, s0, s_j});
  return std::max(r, s_j - (n - s0));
}

void QualitySweepSpec::validate() const {
  if (s_values.empty()) throw ArgumentError("quality sweep needs at least one s_j value");
  if (m_grid.empty() || !std::is_sorted(m_grid.begin(), m_grid.end())) {
    throw ArgumentError("m grid must be non-empty and ascending");
  }
  if (!(target_success > 0.0) || target_success > 1.0) {
    throw ArgumentError("target success rate must lie in (0, 1]");
  }
  if (!(overlap_ratio >= 0.0) || overlap_ratio > 1.0) {
    throw ArgumentError("overlap ratio must lie in [0, 1]");
  }
  for (Index s : s_values) {
    uniform_scenario(n, s0, num_side_info, s, overlap_for(s), base_seed).validate();
  }
}

std::vector<QualityRow> run_quality_sweep(const QualitySweepSpec& spec) {
  spec.validate();
  std::vector<QualityRow> rows;
  for (Index s : spec.s_values) {
    const Index r = spec.overlap_for(s);
    for (const PolicySpec& policy : spec.policies) {
      std::map<std::size_t, double> rate_at;
      auto rate = [&](std::size_t idx) {
        if (auto it = rate_at.find(idx); it != rate_at.end()) return it->second;
        SweepSpec probe;
        probe.scenario = uniform_scenario(spec.n, spec.s0, spec.num_side_info, s, r, 0);
        probe.m_values = {spec.m_grid[idx]};
        probe.trials = spec.trials;
        probe.policies = {policy};
        probe.success_threshold = spec.success_threshold;
        probe.base_seed = spec.base_seed;
        probe.solver = spec.solver;
        probe.threads = spec.threads;
        const double value = run_sweep(probe).points.front().success_rate;
        rate_at[idx] = value;
        return value;
      };

      QualityRow row{s, r, policy, spec.n + 1, 0.0};
      std::size_t hi = spec.m_grid.size() - 1;
      const double top = rate(hi);
      if (top + 1e-12 < spec.target_success) {
        row.success_rate = top;
      } else {
        std::size_t lo = 0;
        while (lo < hi) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (rate(mid) + 1e-12 >= spec.target_success) {
            hi = mid;
          } else {
            lo = mid + 1;
          }
        }
        row.m_required = spec.m_grid[hi];
        row.success_rate = rate(hi);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

nlohmann::json to_json(const SweepResult& result) {
  using nlohmann::json;
  const SweepSpec& s = result.spec;
  json config = {
      {"n", s.scenario.n},
      {"s0", s.scenario.s0},
      {"s_j", s.scenario.s_j},
      {"r_j", s.scenario.r_j},
      {"difference_scale", s.scenario.difference_scale},
      {"m_values", s.m_values},
      {"trials", s.trials},
      {"success_threshold", s.success_threshold},
      {"base_seed", s.base_seed},
      {"lambda", s.solver.lambda},
      {"epsilon", s.solver.epsilon},
      {"rel_tol", s.solver.rel_tol},
      {"stall_iters", s.solver.stall_iters},
      {"max_iters", s.solver.max_iters},
  };
  json policies = json::array();
  for (const PolicySpec& p : s.policies) {
    policies.push_back({{"label", p.label()},
                        {"policy", std::string(to_string(p.policy))},
                        {"side_info_used", p.side_info_used}});
  }
  config["policies"] = policies;

  json points = json::array();
  for (const SweepPoint& pt : result.points) {
    points.push_back({{"policy", pt.policy.label()},
                      {"m", pt.m},
                      {"trials", pt.trials},
                      {"successes", pt.successes},
                      {"success_rate", pt.success_rate},
                      {"mean_rel_error", pt.mean_rel_error},
                      {"mean_iters", pt.mean_iters}});
  }
  json bounds = json::array();
  for (const PolicyBound& b : result.bounds) {
    json per_trial = json::array();
    for (const auto& v : b.per_trial) per_trial.push_back(v ? json(*v) : json(nullptr));
    bounds.push_back({{"policy", b.policy.label()},
                      {"mean_bound", b.mean_bound ? json(*b.mean_bound) : json(nullptr)},
                      {"defined_trials", b.defined_trials},
                      {"per_trial", per_trial}});
  }
  return {{"config", config}, {"results", points}, {"bounds", bounds}};
}

nlohmann::json to_json(const QualitySweepSpec& spec, const std::vector<QualityRow>& rows) {
  using nlohmann::json;
  json policies = json::array();
  for (const PolicySpec& p : spec.policies) policies.push_back(p.label());
  json config = {{"n", spec.n},
                 {"s0", spec.s0},
                 {"num_side_info", spec.num_side_info},
                 {"s_values", spec.s_values},
                 {"overlap_ratio", spec.overlap_ratio},
                 {"m_grid", spec.m_grid},
                 {"trials", spec.trials},
                 {"target_success", spec.target_success},
                 {"success_threshold", spec.success_threshold},
                 {"base_seed", spec.base_seed},
                 {"lambda", spec.solver.lambda},
                 {"epsilon", spec.solver.epsilon},
                 {"rel_tol", spec.solver.rel_tol},
                 {"stall_iters", spec.solver.stall_iters},
                 {"max_iters", spec.solver.max_iters},
                 {"policies", policies}};
  json results = json::array();
  for (const QualityRow& r : rows) {
    results.push_back({{"s_j", r.s_j},
                       {"r_j", r.r_j},
                       {"policy", r.policy.label()},
                       {"m_required", r.m_required},
                       {"success_rate", r.success_rate}});
  }
  return {{"config", config}, {"results", results}};
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "policy,J,m,trials,successes,success_rate,mean_rel_error,mean_iters,mean_bound\n";
  for (std::size_t p = 0; p < result.spec.policies.size(); ++p) {
    const PolicyBound& b = result.bounds[p];
    for (std::size_t k = 0; k < result.spec.m_values.size(); ++k) {
      const SweepPoint& pt = result.at(p, k);
      out << pt.policy.label() << ',' << pt.policy.side_info_used << ',' << pt.m << ','
          << pt.trials << ',' << pt.successes << ',' << csv_number(pt.success_rate) << ','
          << csv_number(pt.mean_rel_error) << ',' << csv_number(pt.mean_iters) << ','
          << (b.mean_bound ? csv_number(*b.mean_bound) : std::string()) << '\n';
    }
  }
  return out.str();
}

std::string to_csv(const std::vector<QualityRow>& rows) {
  std::ostringstream out;
  out << "s_j,r_j,policy,m_required,success_rate\n";
  for (const QualityRow& r : rows) {
    out << r.s_j << ',' << r.r_j << ',' << r.policy.label() << ',' << r.m_required << ','
        << csv_number(r.success_rate) << '\n';
  }
  return out.str();
}

}  // namespace ramsi
