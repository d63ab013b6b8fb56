#include "ramsi/solver.hpp"

#include <cmath>
#include <limits>

#include "ramsi/prox.hpp"

namespace ramsi {

namespace {

double weighted_penalty(const Vector& x, const SideInformationEnsemble& ensemble,
                        const Eigen::MatrixXd& w) {
  double sum = 0.0;
  const Index rows = ensemble.count() + 1;
  for (Index i = 0; i < x.size(); ++i) {
    for (Index j = 0; j < rows; ++j) {
      sum += w(j, i) * std::abs(x[i] - ensemble.value(j, i));
    }
  }
  return sum;
}

}  // namespace

WeightSet initial_weights(WeightPolicy policy, Index num_side_info, Index n) {
  // The adaptive iteration starts from W_0 = I like plain l1.
  if (policy == WeightPolicy::FixedL1L1) return WeightSet::l1l1(num_side_info, n);
  return WeightSet::l1(num_side_info, n);
}

double objective(const SignalVector& x, const MeasurementVector& y, const SensingMatrix& a,
                 const SideInformationEnsemble& ensemble, const WeightSet& weights,
                 double lambda) {
  if (x.size() != a.cols() || y.size() != a.rows() || ensemble.dimension() != x.size() ||
      weights.dimension() != x.size() || weights.num_side_info() != ensemble.count()) {
    throw DimensionError("objective: operand dimensions disagree");
  }
  const double fit = 0.5 * (a.entries() * x.values() - y.values()).squaredNorm();
  return fit + lambda * weighted_penalty(x.values(), ensemble, weights.matrix());
}

RecoveryResult recover(const MeasurementVector& y, const SensingMatrix& a,
                       const SideInformationEnsemble& ensemble, const SolverConfig& config,
                       WeightPolicy policy) {
  config.validate();
  const Index m = a.rows();
  const Index n = a.cols();
  if (y.size() != m || ensemble.dimension() != n) {
    throw DimensionError("recover: measurements, matrix and side information disagree");
  }

  const double lipschitz =
      config.lipschitz_override ? *config.lipschitz_override : lipschitz_constant(a);
  if (!(lipschitz > 0.0)) throw NumericError("Lipschitz constant is not positive", lipschitz);
  const double step = config.lambda / lipschitz;

  const auto& mat = a.entries();
  const Vector& yv = y.values();
  Eigen::MatrixXd w = initial_weights(policy, ensemble.count(), n).matrix();

  Vector x = Vector::Zero(n);
  Vector x_prev = Vector::Zero(n);
  Vector u = Vector::Zero(n);
  Vector v(n);
  // A x and A u are tracked alongside x and u; A u follows from linearity so
  // each iteration costs one product with A and one with A^T.
  Vector ax = Vector::Zero(m);
  Vector ax_prev = Vector::Zero(m);
  Vector au = Vector::Zero(m);

  SolveTrace trace;
  double h_prev = 0.5 * yv.squaredNorm() + config.lambda * weighted_penalty(x, ensemble, w);
  double t = 1.0;
  int below = 0;

  for (int k = 1; k <= config.max_iters; ++k) {
    v.noalias() = mat.transpose() * (au - yv);
    v = u - v / lipschitz;
    prox_vector_into(v, ensemble, w, step, x);
    ax.noalias() = mat * x;

    const double h = 0.5 * (ax - yv).squaredNorm() + config.lambda * weighted_penalty(x, ensemble, w);
    trace.objective_history.push_back(h);
    double rel;
    if (h_prev == 0.0) {
      rel = h == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      rel = std::abs(h - h_prev) / h_prev;
    }
    h_prev = h;
    trace.iterations = k;
    trace.final_relative_change = rel;

    if (policy == WeightPolicy::Adaptive) update_weights_into(x, ensemble, config.epsilon, w);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    u = x + beta * (x - x_prev);
    au = ax + beta * (ax - ax_prev);
    x_prev = x;
    ax_prev = ax;
    t = t_next;

    below = rel < config.rel_tol ? below + 1 : 0;
    // H = 0 is the global minimum; nothing further can change.
    if (below >= config.stall_iters || (h == 0.0 && below > 0)) {
      trace.converged = true;
      break;
    }
  }
  return RecoveryResult{SignalVector(std::move(x)), std::move(trace)};
}

double relative_error(const SignalVector& estimate, const SignalVector& truth) {
  if (estimate.size() != truth.size()) throw DimensionError("relative_error: length mismatch");
  const double diff = (estimate.values() - truth.values()).norm();
  const double scale = truth.values().norm();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace ramsi
