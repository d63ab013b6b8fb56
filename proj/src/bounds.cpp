#include "ramsi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

namespace ramsi {

namespace {

constexpr double kSevenFifths = 7.0 / 5.0;

void check_dimensions(const SignalVector& x, const SideInformationEnsemble& ensemble) {
  if (x.size() != ensemble.dimension()) {
    throw DimensionError("source length does not match side information");
  }
}

// Shared tail of the n-l1 bound once the weights and c_i are known.
BoundReport assemble(const SupportDecomposition& dec, const SignalVector& x,
                     const SideInformationEnsemble& ensemble, const Eigen::MatrixXd& w,
                     const std::vector<double>& c, double zero_tol, bool delta_vanishes) {
  BoundReport report;
  report.p = dec.p;
  report.q = dec.q;
  const double n = static_cast<double>(dec.n);
  report.p_feasible = static_cast<double>(dec.p) < n / feasibility_gamma();

  for (Index i : dec.full_indices) {
    double a = 0.0;
    for (Index j = 0; j <= ensemble.count(); ++j) {
      a += (x[i] - ensemble.value(j, i) > zero_tol) ? w(j, i) : -w(j, i);
    }
    report.a_bar += a * a;
  }

  report.s_bar = static_cast<double>(dec.p);
  for (double ci : c) report.s_bar += 1.0 - ci;

  if (!(report.s_bar < n) || !(report.s_bar > 0.0)) {
    report.note = "s_bar outside (0, n); log(n/s_bar) is not positive";
    return report;
  }
  const double log_ratio = std::log(n / report.s_bar);

  if (!c.empty()) report.min_c = *std::min_element(c.begin(), c.end());

  if (delta_vanishes) {
    report.delta = 0.0;
  } else if (!report.min_c) {
    report.delta = 0.0;
    report.note = "no partial indices; kappa undefined and delta = 0";
  } else if (*report.min_c <= 0.5) {
    report.note = "min c_i <= 1/2; kappa has a nonpositive denominator";
    return report;
  } else {
    const double mc = *report.min_c;
    report.kappa = 2.0 * mc / (std::sqrt(std::numbers::pi * log_ratio) * (2.0 * mc - 1.0));
    report.delta = (*report.kappa - 1.0) * (report.s_bar - static_cast<double>(dec.p));
  }

  report.m_bound = 2.0 * report.a_bar * log_ratio + kSevenFifths * report.s_bar + report.delta + 1.0;
  return report;
}

}  // namespace

SupportDecomposition decompose(const SignalVector& x, const SideInformationEnsemble& ensemble,
                               double zero_tol) {
  if (!(zero_tol >= 0.0)) throw ArgumentError("zero_tol must be non-negative");
  check_dimensions(x, ensemble);

  const Index n = x.size();
  const Index rows = ensemble.count() + 1;
  SupportDecomposition dec;
  dec.n = n;
  dec.num_side_info = ensemble.count();
  dec.d.assign(static_cast<std::size_t>(n), 0);
  dec.l.assign(static_cast<std::size_t>(n), -1);
  dec.s.assign(static_cast<std::size_t>(rows), 0);

  Index all_zero = 0;
  for (Index i = 0; i < n; ++i) {
    int zeros = 0;
    int below = 0;
    for (Index j = 0; j < rows; ++j) {
      const double diff = x[i] - ensemble.value(j, i);
      if (std::abs(diff) <= zero_tol) {
        ++zeros;
      } else {
        ++dec.s[static_cast<std::size_t>(j)];
        if (diff > 0.0) ++below;
      }
    }
    dec.d[static_cast<std::size_t>(i)] = zeros;
    dec.l[static_cast<std::size_t>(i)] = below - 1;
    if (zeros == 0) {
      dec.full_indices.push_back(i);
    } else if (zeros == rows) {
      ++all_zero;
    } else {
      dec.partial_indices.push_back(i);
    }
  }
  dec.p = static_cast<Index>(dec.full_indices.size());
  dec.q = n - all_zero;

  Index partial_zeros = 0;
  for (Index i : dec.partial_indices) partial_zeros += dec.d[static_cast<std::size_t>(i)];
  Index support_total = 0;
  for (Index sj : dec.s) support_total += sj;
  if (rows * (n - dec.q) + partial_zeros != rows * n - support_total) {
    throw ConsistencyError("zero-count identity violated in support decomposition");
  }
  const auto [smin, smax] = std::minmax_element(dec.s.begin(), dec.s.end());
  if (dec.p > *smin || *smax > dec.q) {
    throw ConsistencyError("support decomposition violates p <= min s_j <= max s_j <= q");
  }
  return dec;
}

BoundReport bound_nl1(const SignalVector& x, const SideInformationEnsemble& ensemble,
                      double epsilon, double zero_tol) {
  const WeightSet weights = update_weights(x, ensemble, epsilon);
  const SupportDecomposition dec = decompose(x, ensemble, zero_tol);

  std::vector<double> c;
  c.reserve(dec.partial_indices.size());
  for (Index i : dec.partial_indices) {
    double denom = 0.0;
    for (Index j = 0; j <= ensemble.count(); ++j) {
      denom += epsilon / (std::abs(x[i] - ensemble.value(j, i)) + epsilon);
    }
    c.push_back(dec.d[static_cast<std::size_t>(i)] / denom);
  }
  return assemble(dec, x, ensemble, weights.matrix(), c, zero_tol, false);
}

BoundReport bound_nl1(const SignalVector& x, const SideInformationEnsemble& ensemble,
                      WeightPolicy policy, double epsilon, double zero_tol) {
  if (policy == WeightPolicy::Adaptive) return bound_nl1(x, ensemble, epsilon, zero_tol);
  check_dimensions(x, ensemble);

  // W_j = 0 removes z_j from the objective entirely, so it also leaves the
  // zero pattern.
  const Index kept = policy == WeightPolicy::FixedL1 ? 0 : 1;
  if (ensemble.count() < kept) {
    throw ArgumentError("l1-l1 weights need at least one side information signal");
  }
  const SideInformationEnsemble reduced = ensemble.truncated(kept);
  const Eigen::MatrixXd w =
      Eigen::MatrixXd::Constant(kept + 1, x.size(), 1.0 / static_cast<double>(kept + 1));
  const SupportDecomposition dec = decompose(x, reduced, zero_tol);

  std::vector<double> c;
  c.reserve(dec.partial_indices.size());
  for (Index i : dec.partial_indices) {
    double ci = 0.0;
    for (Index j = 0; j <= kept; ++j) {
      if (std::abs(x[i] - reduced.value(j, i)) <= zero_tol) ci += w(j, i);
    }
    c.push_back(ci);
  }
  return assemble(dec, x, reduced, w, c, zero_tol, true);
}

double bound_l1(Index n, Index s0) {
  if (s0 <= 0 || s0 >= n) {
    throw ArgumentError("bound_l1 needs 0 < s0 < n (got s0=" + std::to_string(s0) +
                        ", n=" + std::to_string(n) + ")");
  }
  const double s = static_cast<double>(s0);
  return 2.0 * s * std::log(static_cast<double>(n) / s) + kSevenFifths * s + 1.0;
}

L1L1Counts l1l1_counts(const SignalVector& x, const SignalVector& z, double zero_tol) {
  if (x.size() != z.size()) throw DimensionError("l1l1_counts: length mismatch");
  if (!(zero_tol >= 0.0)) throw ArgumentError("zero_tol must be non-negative");
  L1L1Counts counts;
  for (Index i = 0; i < x.size(); ++i) {
    const bool x_zero = std::abs(x[i]) <= zero_tol;
    const double diff = x[i] - z[i];
    const bool equal = std::abs(diff) <= zero_tol;
    if (!x_zero) ++counts.s0;
    if (!equal) ++counts.s1;
    if (x_zero && !equal) ++counts.xi;
    if (!x_zero && equal) --counts.xi;
    if (!x_zero && !equal && ((x[i] > 0.0) == (diff > 0.0))) ++counts.h_bar;
  }
  return counts;
}

std::optional<double> bound_l1l1(const SignalVector& x, const SignalVector& z, double zero_tol) {
  const L1L1Counts c = l1l1_counts(x, z, zero_tol);
  const double n = static_cast<double>(x.size());
  const double s_bar = static_cast<double>(c.s0) + 0.5 * static_cast<double>(c.xi);
  if (!(s_bar > 0.0) || !(s_bar < n)) return std::nullopt;
  return 2.0 * static_cast<double>(c.h_bar) * std::log(n / s_bar) + kSevenFifths * s_bar + 1.0;
}

std::optional<double> bound_simple(const SignalVector& x, const SideInformationEnsemble& ensemble,
                                   double epsilon, double zero_tol) {
  const BoundReport r = bound_nl1(x, ensemble, epsilon, zero_tol);
  if (r.p <= 0 || r.p >= x.size()) return std::nullopt;
  const double p = static_cast<double>(r.p);
  return 2.0 * r.a_bar * std::log(static_cast<double>(x.size()) / p) + kSevenFifths * p + 1.0;
}

double bound_loose_nl1(Index n, Index p) {
  if (p <= 0 || p >= n) throw ArgumentError("bound_loose_nl1 needs 0 < p < n");
  const double pp = static_cast<double>(p);
  return 2.0 * pp * std::log(static_cast<double>(n) / pp) + kSevenFifths * pp + 1.0;
}

double bound_loose_l1l1(Index n, Index s0, Index s1) {
  if (s0 <= 0 || s1 < 0) throw ArgumentError("bound_loose_l1l1 needs s0 > 0 and s1 >= 0");
  const double s_bar = 0.5 * static_cast<double>(s0 + s1);
  if (!(s_bar < static_cast<double>(n))) throw ArgumentError("bound_loose_l1l1 needs (s0+s1)/2 < n");
  const double rho = static_cast<double>(std::min(s0, s1));
  return 2.0 * rho * std::log(static_cast<double>(n) / s_bar) + kSevenFifths * s_bar + 1.0;
}

double feasibility_gamma() {
  static const double root = [] {
    // f has its minimum at gamma = 2, so the crossing above 1 lies in (2, 10).
    const auto f = [](double g) { return g - 2.0 * std::log(g) - kSevenFifths; };
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        f, 2.0, 10.0, boost::math::tools::eps_tolerance<double>(52), max_iter);
    return 0.5 * (lo + hi);
  }();
  return root;
}

}  // namespace ramsi
