#pragma once

#include <vector>

#include "ramsi/core.hpp"
#include "ramsi/weights.hpp"

namespace ramsi {

/// Weights used by `policy` at the first iteration.
WeightSet initial_weights(WeightPolicy policy, Index num_side_info, Index n);

struct SolveTrace {
  /// H(x^(k)) for k = 1..iterations, each evaluated with the weights that
  /// produced x^(k).
  std::vector<double> objective_history;
  int iterations = 0;
  double final_relative_change = 0.0;
  bool converged = false;
};

struct RecoveryResult {
  SignalVector x;
  SolveTrace trace;
};

/// 1/2 ||A x - y||^2 + lambda * sum_j ||W_j (x - z_j)||_1.
double objective(const SignalVector& x, const MeasurementVector& y, const SensingMatrix& a,
                 const SideInformationEnsemble& ensemble, const WeightSet& weights,
                 double lambda);

/// Accelerated proximal gradient on the weighted n-l1 objective.
///
/// Each iteration takes a gradient step from the extrapolated point u, applies
/// the closed-form prox with the current weights, then (Adaptive only)
/// recomputes the weights from the new iterate before the momentum update.
/// Stops when the relative change of H drops below config.rel_tol or after
/// config.max_iters iterations. H(x^(0)) is evaluated at x = 0 with the
/// initial weights, so a zero problem stops after one iteration.
RecoveryResult recover(const MeasurementVector& y, const SensingMatrix& a,
                       const SideInformationEnsemble& ensemble, const SolverConfig& config,
                       WeightPolicy policy);

/// ||x_hat - x||_2 / ||x||_2 (absolute error when x = 0).
double relative_error(const SignalVector& estimate, const SignalVector& truth);

}  // namespace ramsi
