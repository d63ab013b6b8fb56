#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramsi/core.hpp"
#include "ramsi/weights.hpp"

namespace ramsi {

/// Zero/nonzero pattern of the difference vectors x - z_j, j = 0..J.
///
/// A difference counts as zero when |x_i - z_ji| <= zero_tol.
struct SupportDecomposition {
  Index n = 0;
  Index num_side_info = 0;
  /// Indices where all J+1 differences are nonzero.
  Index p = 0;
  /// n minus the number of indices where all differences are zero.
  Index q = 0;
  std::vector<Index> full_indices;
  /// Indices with between 1 and J zero differences.
  std::vector<Index> partial_indices;
  /// Number of zero differences at every index (0..J+1).
  std::vector<int> d;
  /// Interval index in -1..J: after sorting z_0i..z_Ji, x_i lies in
  /// (z_(l)i, z_(l+1)i].
  std::vector<int> l;
  /// s_j = ||x - z_j||_0 for j = 0..J.
  std::vector<Index> s;
};

/// Throws ArgumentError for a negative tolerance and ConsistencyError if the
/// zero-count identity (J+1)(n-q) + sum d_i = (J+1)n - sum s_j fails.
SupportDecomposition decompose(const SignalVector& x, const SideInformationEnsemble& ensemble,
                               double zero_tol = 0.0);

/// Weighted n-l1 measurement bound and its intermediate quantities.
struct BoundReport {
  /// Unset when the bound is undefined (see `note`).
  std::optional<double> m_bound;
  double a_bar = 0.0;
  double s_bar = 0.0;
  /// Unset when there are no partial indices or min c_i <= 1/2.
  std::optional<double> kappa;
  double delta = 0.0;
  Index p = 0;
  Index q = 0;
  std::optional<double> min_c;
  /// p/n below 1/gamma*, the regime where the loose bound stays under n.
  bool p_feasible = false;
  std::string note;
};

/// m >= 2 a_bar log(n/s_bar) + 7/5 s_bar + delta + 1 evaluated at the true x
/// with the adaptive weights of update_weights(x, ensemble, epsilon).
///
///   a_i   = sum_j w_ji sign(x_i - z_ji)       (indices with no zero difference)
///   c_i   = d_i / sum_j eps / (|x_i - z_ji| + eps)   (partial indices)
///   a_bar = sum a_i^2,  s_bar = p + sum (1 - c_i)
///   kappa = 2 min c / (sqrt(pi log(n/s_bar)) (2 min c - 1))
///   delta = (kappa - 1)(s_bar - p)
BoundReport bound_nl1(const SignalVector& x, const SideInformationEnsemble& ensemble,
                      double epsilon, double zero_tol = 0.0);

/// The same bound under a weight policy. Adaptive forwards to bound_nl1.
/// FixedL1 drops every side information signal (W_0 = I); FixedL1L1 keeps
/// z_1 with W_0 = W_1 = I/2. For the fixed policies c_i = sum of the weights
/// on zero differences and delta = 0, which reproduces the l1 and l1-l1
/// bounds exactly.
BoundReport bound_nl1(const SignalVector& x, const SideInformationEnsemble& ensemble,
                      WeightPolicy policy, double epsilon, double zero_tol = 0.0);

/// 2 s0 log(n/s0) + 7/5 s0 + 1. Throws ArgumentError unless 0 < s0 < n.
double bound_l1(Index n, Index s0);

/// Counting quantities of the l1-l1 bound for x and a single signal z.
struct L1L1Counts {
  Index s0 = 0;
  Index s1 = 0;
  /// |{z_i != x_i = 0}| - |{z_i = x_i != 0}|
  Index xi = 0;
  /// |{x_i > 0, x_i > z_i} u {x_i < 0, x_i < z_i}|
  Index h_bar = 0;
};

L1L1Counts l1l1_counts(const SignalVector& x, const SignalVector& z, double zero_tol = 0.0);

/// 2 h_bar log(n/(s0 + xi/2)) + 7/5 (s0 + xi/2) + 1; unset when
/// s0 + xi/2 is outside (0, n).
std::optional<double> bound_l1l1(const SignalVector& x, const SignalVector& z,
                                 double zero_tol = 0.0);

/// 2 a_bar log(n/p) + 7/5 p + 1 with the adaptive a_bar; unset when p = 0 or
/// p >= n.
std::optional<double> bound_simple(const SignalVector& x, const SideInformationEnsemble& ensemble,
                                   double epsilon, double zero_tol = 0.0);

/// 2 p log(n/p) + 7/5 p + 1. Throws ArgumentError unless 0 < p < n.
double bound_loose_nl1(Index n, Index p);

/// 2 rho log(n/s_bar) + 7/5 s_bar + 1, rho = min(s0, s1), s_bar = (s0+s1)/2.
/// Throws ArgumentError unless s0 > 0, s1 >= 0 and s_bar < n.
double bound_loose_l1l1(Index n, Index s0, Index s1);

/// Root gamma* > 1 of gamma - 2 log(gamma) - 7/5 (about 4.33).
double feasibility_gamma();

}  // namespace ramsi
