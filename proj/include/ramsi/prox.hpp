#pragma once

#include <span>
#include <vector>

#include "ramsi/core.hpp"
#include "ramsi/weights.hpp"

namespace ramsi {

struct Anchor {
  double z;
  double weight;
};

struct ProxElementInput {
  double x;
  /// All anchors including (0, w_0). Any order.
  std::vector<Anchor> anchors;
  /// lambda / L.
  double step;
};

/// Unique minimizer of
///   h(v) = step * sum_j w_j |v - z_j| + (v - x)^2 / 2.
///
/// Anchors are sorted by z and equal z values merged (weights summed). Between
/// consecutive anchors z_l < v < z_{l+1} the penalty has constant slope
/// shift_l = step * (sum_{k<=l} w_k - sum_{k>l} w_k), so the candidate is
/// x - shift_l; when it falls outside that interval the minimizer is clamped
/// to the anchor z_l for which z_l + shift_{l-1} <= x <= z_l + shift_l.
///
/// Throws ArgumentError for non-positive weights or step, or no anchors.
double prox_element(const ProxElementInput& input);

/// Same as above without the allocation; `anchors` is reordered in place.
double prox_element(double x, std::span<Anchor> anchors, double step);

/// prox_element applied independently at every index with anchors
/// {(0, w_0i), (z_1i, w_1i), ..., (z_Ji, w_Ji)}.
SignalVector prox_vector(const SignalVector& x, const SideInformationEnsemble& ensemble,
                         const WeightSet& weights, double step);

/// Unchecked kernel behind prox_vector.
void prox_vector_into(const Vector& x, const SideInformationEnsemble& ensemble,
                      const Eigen::MatrixXd& weights, double step, Vector& out);

}  // namespace ramsi
