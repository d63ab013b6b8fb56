#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ramsi/bounds.hpp"
#include "ramsi/error.hpp"
#include "ramsi/harness.hpp"
#include "ramsi/io.hpp"
#include "ramsi/solver.hpp"
#include "ramsi/synth.hpp"

using namespace ramsi;

namespace {

enum ExitCode { kOk = 0, kArgument = 2, kData = 3, kNumeric = 4 };

struct ScenarioFlags {
  Index n = 1000;
  Index s0 = 128;
  Index sj = 64;
  Index rj = 51;
  Index J = 3;
  double difference_scale = 0.79;
};

struct SolverFlags {
  double lambda = SolverConfig{}.lambda;
  double epsilon = SolverConfig{}.epsilon;
  double rel_tol = SolverConfig{}.rel_tol;
  int stall_iters = SolverConfig{}.stall_iters;
  int max_iters = SolverConfig{}.max_iters;

  SolverConfig config() const {
    SolverConfig c;
    c.lambda = lambda;
    c.epsilon = epsilon;
    c.rel_tol = rel_tol;
    c.stall_iters = stall_iters;
    c.max_iters = max_iters;
    c.validate();
    return c;
  }
};

void add_scenario_flags(CLI::App* app, ScenarioFlags& f) {
  app->add_option("--n", f.n, "Signal length")->capture_default_str();
  app->add_option("--s0", f.s0, "Nonzeros of x")->capture_default_str();
  app->add_option("--sj", f.sj, "Nonzeros of x - z_j")->capture_default_str();
  app->add_option("--rj", f.rj, "Positions of x - z_j on the support of x")
      ->capture_default_str();
  app->add_option("--J", f.J, "Number of side information signals")->capture_default_str();
  app->add_option("--difference-scale", f.difference_scale,
                  "Standard deviation of nonzero entries of x - z_j")
      ->capture_default_str();
}

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--lambda", f.lambda)->capture_default_str();
  app->add_option("--epsilon", f.epsilon)->capture_default_str();
  app->add_option("--rel-tol", f.rel_tol)->capture_default_str();
  app->add_option("--stall-iters", f.stall_iters,
                  "Consecutive iterations below --rel-tol before stopping")
      ->capture_default_str();
  app->add_option("--max-iters", f.max_iters)->capture_default_str();
}

ScenarioSpec scenario_from(const ScenarioFlags& f, std::uint64_t seed) {
  ScenarioSpec spec = uniform_scenario(f.n, f.s0, f.J, f.sj, f.rj, seed);
  spec.difference_scale = f.difference_scale;
  spec.validate();
  return spec;
}

// "200:700:50" (inclusive range) or "200,250,300".
std::vector<Index> parse_grid(const std::string& text) {
  std::vector<Index> out;
  auto to_index = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ArgumentError("bad grid value '" + s + "'");
    return static_cast<Index>(v);
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ArgumentError("range must be start:stop:step");
    const Index start = to_index(parts[0]), stop = to_index(parts[1]), step = to_index(parts[2]);
    if (step <= 0 || stop < start) throw ArgumentError("bad range '" + text + "'");
    for (Index v = start; v <= stop; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_index(p));
  }
  if (out.empty()) throw ArgumentError("empty grid");
  return out;
}

std::vector<PolicySpec> parse_policies(const std::vector<std::string>& texts) {
  std::vector<PolicySpec> out;
  for (const auto& t : texts) out.push_back(parse_policy_spec(t));
  return out;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string optional_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("undefined");
}

void print_report(const BoundReport& r, Index n) {
  std::cout << "m_bound  " << optional_str(r.m_bound) << '\n'
            << "a_bar    " << format_double(r.a_bar) << '\n'
            << "s_bar    " << format_double(r.s_bar) << '\n'
            << "kappa    " << optional_str(r.kappa) << '\n'
            << "delta    " << format_double(r.delta) << '\n'
            << "p        " << r.p << '\n'
            << "q        " << r.q << '\n'
            << "min_c    " << optional_str(r.min_c) << '\n'
            << "n        " << n << '\n'
            << "p_feasible " << (r.p_feasible ? "yes" : "no") << '\n';
  if (!r.note.empty()) std::cout << "note     " << r.note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovery with multiple side information signals"};
  app.require_subcommand(1);

  ScenarioFlags scen;
  SolverFlags solv;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";
  std::string in_path;
  Index m = 0;
  std::string policy_text = "adaptive:3";
  std::vector<std::string> policy_texts;
  std::string m_grid = "200:700:50";
  std::string s_grid = "16,32,64,128,256,352";
  int trials = 20;
  double threshold = 1e-2;
  double target = 0.98;
  double overlap = 0.8;
  unsigned threads = 0;

  auto* gen = app.add_subcommand("gen", "Write a synthetic scenario as CSV");
  add_scenario_flags(gen, scen);
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--out", out_path, "Output file (stdout if omitted)");

  auto* rec = app.add_subcommand("recover", "Recover x from Gaussian measurements of a CSV scenario");
  rec->add_option("--in", in_path, "Scenario CSV (x, z1..zJ)")->required();
  rec->add_option("--m", m, "Number of measurements")->required();
  rec->add_option("--seed", seed, "Seed for the sensing matrix")->capture_default_str();
  rec->add_option("--policy", policy_text, "adaptive:J, l1 or l1l1")->capture_default_str();
  rec->add_option("--out", out_path, "Write the estimate as CSV");
  add_solver_flags(rec, solv);

  auto* bnd = app.add_subcommand("bound", "Measurement bound for a scenario");
  bnd->add_option("--in", in_path, "Scenario CSV; a synthetic scenario is drawn if omitted");
  add_scenario_flags(bnd, scen);
  bnd->add_option("--seed", seed)->capture_default_str();
  bnd->add_option("--policy", policy_text)->capture_default_str();
  bnd->add_option("--epsilon", solv.epsilon)->capture_default_str();
  std::optional<double> zero_tol;
  bnd->add_option("--zero-tol", zero_tol,
                  "Differences at most this large count as zero (default 1e-9 for --in, else 0)");

  auto* swp = app.add_subcommand("sweep", "Success rate versus number of measurements");
  add_scenario_flags(swp, scen);
  add_solver_flags(swp, solv);
  swp->add_option("--m-grid", m_grid, "start:stop:step or comma list")->capture_default_str();
  swp->add_option("--trials", trials)->capture_default_str();
  swp->add_option("--policy", policy_texts, "Repeatable; default adaptive:J and l1");
  swp->add_option("--threshold", threshold, "Relative error counted as success")
      ->capture_default_str();
  swp->add_option("--seed", seed)->capture_default_str();
  swp->add_option("--threads", threads, "0 = hardware concurrency")->capture_default_str();
  swp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  swp->add_option("--out", out_path);

  auto* qs = app.add_subcommand("quality-sweep", "Required measurements versus side information quality");
  add_scenario_flags(qs, scen);
  add_solver_flags(qs, solv);
  qs->add_option("--sj-grid", s_grid, "s_j values, comma list or start:stop:step")
      ->capture_default_str();
  qs->add_option("--overlap", overlap, "r_j / s_j")->capture_default_str();
  qs->add_option("--m-grid", m_grid)->capture_default_str();
  qs->add_option("--trials", trials)->capture_default_str();
  qs->add_option("--target", target, "Target success rate")->capture_default_str();
  qs->add_option("--policy", policy_texts, "Repeatable; default adaptive:J and l1");
  qs->add_option("--threshold", threshold)->capture_default_str();
  qs->add_option("--seed", seed)->capture_default_str();
  qs->add_option("--threads", threads)->capture_default_str();
  qs->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  qs->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }

  try {
    if (*gen) {
      const Scenario s = generate_scenario(scenario_from(scen, seed));
      if (out_path.empty()) {
        write_vectors_csv(std::cout, s.x, s.ensemble);
      } else {
        write_vectors_csv(std::filesystem::path(out_path), s.x, s.ensemble);
      }
    } else if (*rec) {
      const VectorTable table = read_vectors_csv(std::filesystem::path(in_path));
      const PolicySpec policy = parse_policy_spec(policy_text);
      if (policy.side_info_used > table.ensemble.count()) {
        throw ArgumentError("policy uses more side information than the file provides");
      }
      const SensingMatrix a = generate_sensing_matrix(seed, m, table.x.size());
      const RecoveryResult r = recover(apply(a, table.x), a,
                                       table.ensemble.truncated(policy.side_info_used),
                                       solv.config(), policy.policy);
      std::cout << "relative_error " << format_double(relative_error(r.x, table.x)) << '\n'
                << "iterations " << r.trace.iterations << '\n'
                << "converged " << (r.trace.converged ? "yes" : "no") << '\n';
      if (!out_path.empty()) {
        write_vectors_csv(std::filesystem::path(out_path), r.x,
                          SideInformationEnsemble(r.x.size()));
      }
    } else if (*bnd) {
      const PolicySpec policy = parse_policy_spec(policy_text);
      const VectorTable t = [&] {
        if (!in_path.empty()) return read_vectors_csv(std::filesystem::path(in_path));
        Scenario s = generate_scenario(scenario_from(scen, seed));
        return VectorTable{std::move(s.x), std::move(s.ensemble)};
      }();
      const SignalVector& x = t.x;
      const SideInformationEnsemble& ens = t.ensemble;
      if (policy.side_info_used > ens.count()) {
        throw ArgumentError("policy uses more side information than available");
      }
      const double tol = zero_tol.value_or(in_path.empty() ? 0.0 : 1e-9);
      const BoundReport r =
          bound_nl1(x, ens.truncated(policy.side_info_used), policy.policy, solv.epsilon, tol);
      print_report(r, x.size());
    } else if (*swp) {
      SweepSpec spec;
      spec.scenario = scenario_from(scen, 0);
      spec.m_values = parse_grid(m_grid);
      spec.trials = trials;
      spec.policies = policy_texts.empty()
                          ? std::vector<PolicySpec>{{WeightPolicy::Adaptive, scen.J},
                                                    {WeightPolicy::FixedL1, 0}}
                          : parse_policies(policy_texts);
      spec.success_threshold = threshold;
      spec.base_seed = seed;
      spec.solver = solv.config();
      spec.threads = threads;
      const SweepResult result = run_sweep(spec);
      if (format == "json") {
        nlohmann::json j = to_json(result);
        j["generated_at"] = timestamp();
        emit(j.dump(2) + "\n", out_path);
      } else {
        emit(to_csv(result), out_path);
      }
    } else if (*qs) {
      QualitySweepSpec spec;
      spec.n = scen.n;
      spec.s0 = scen.s0;
      spec.num_side_info = scen.J;
      spec.s_values = parse_grid(s_grid);
      spec.overlap_ratio = overlap;
      spec.m_grid = parse_grid(m_grid);
      spec.trials = trials;
      spec.policies = policy_texts.empty()
                          ? std::vector<PolicySpec>{{WeightPolicy::Adaptive, scen.J},
                                                    {WeightPolicy::FixedL1, 0}}
                          : parse_policies(policy_texts);
      spec.target_success = target;
      spec.success_threshold = threshold;
      spec.base_seed = seed;
      spec.solver = solv.config();
      spec.threads = threads;
      const auto rows = run_quality_sweep(spec);
      if (format == "json") {
        nlohmann::json j = to_json(spec, rows);
        j["generated_at"] = timestamp();
        emit(j.dump(2) + "\n", out_path);
      } else {
        emit(to_csv(rows), out_path);
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "error: row " << e.row();
    if (e.column() != ParseError::npos) std::cerr << ", column " << e.column();
    std::cerr << ": " << e.what() << '\n';
    return kData;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgument;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
