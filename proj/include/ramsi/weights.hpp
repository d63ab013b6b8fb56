#pragma once

#include <string_view>

#include <Eigen/Core>

#include "ramsi/core.hpp"

namespace ramsi {

/// How the per-index weights evolve during the solve.
enum class WeightPolicy {
  /// Re-estimated from every iterate (the RAMSI iteration).
  Adaptive,
  /// W_0 = I, W_j -> 0: plain l1 recovery (FISTA).
  FixedL1,
  /// W_0 = W_1 = I/2, W_j -> 0 for j >= 2: l1-l1 recovery with z_1.
  FixedL1L1,
};

std::string_view to_string(WeightPolicy policy);
/// Accepts "adaptive", "l1", "l1l1" (case-sensitive). Throws ArgumentError.
WeightPolicy parse_weight_policy(std::string_view name);

/// Per-index weights w_ji, j = 0..J (row), i = 0..n-1 (column).
///
/// Every column sums to one and every entry is strictly positive. Column-major
/// storage keeps the J+1 weights of one index contiguous.
class WeightSet {
 public:
  /// Validates positivity and unit column sums (to 1e-12).
  explicit WeightSet(Eigen::MatrixXd w);

  /// W_0 = I, W_j -> 0 (realized as `slack`) for j >= 1.
  static WeightSet l1(Index num_side_info, Index n, double slack = kZeroWeightSlack);
  /// W_0 = W_1 = I/2, W_j -> 0 for j >= 2. Requires at least one signal.
  static WeightSet l1l1(Index num_side_info, Index n, double slack = kZeroWeightSlack);

  /// Stand-in for an exactly-zero weight in the fixed policies.
  static constexpr double kZeroWeightSlack = 1e-12;

  Index num_side_info() const noexcept { return w_.rows() - 1; }
  Index dimension() const noexcept { return w_.cols(); }
  double operator()(Index j, Index i) const { return w_(j, i); }
  const Eigen::MatrixXd& matrix() const noexcept { return w_; }

 private:
  WeightSet() = default;
  Eigen::MatrixXd w_;
};

/// w_ji = eta_i / (|x_i - z_ji| + epsilon) with
/// eta_i = (sum_l 1 / (|x_i - z_li| + epsilon))^-1 and z_0 = 0.
///
/// These are the minimizers of sum_j w_ji (|x_i - z_ji| + epsilon) over the
/// simplex, so w_ji (|x_i - z_ji| + epsilon) = eta_i for all j.
WeightSet update_weights(const SignalVector& x, const SideInformationEnsemble& ensemble,
                         double epsilon);

/// In-place variant used by the solver; `out` must already be (J+1) x n.
void update_weights_into(const Vector& x, const SideInformationEnsemble& ensemble,
                         double epsilon, Eigen::MatrixXd& out);

}  // namespace ramsi
