#include "ramsi/weights.hpp"

#include <cmath>
#include <string>

namespace ramsi {

std::string_view to_string(WeightPolicy policy) {
  switch (policy) {
    case WeightPolicy::Adaptive: return "adaptive";
    case WeightPolicy::FixedL1: return "l1";
    case WeightPolicy::FixedL1L1: return "l1l1";
  }
  return "unknown";
}

WeightPolicy parse_weight_policy(std::string_view name) {
  if (name == "adaptive") return WeightPolicy::Adaptive;
  if (name == "l1") return WeightPolicy::FixedL1;
  if (name == "l1l1") return WeightPolicy::FixedL1L1;
  throw ArgumentError("unknown weight policy '" + std::string(name) +
                      "' (expected adaptive, l1 or l1l1)");
}

WeightSet::WeightSet(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() < 1 || w_.cols() < 1) {
    throw DimensionError("weight set must have at least one row and column");
  }
  for (Index i = 0; i < w_.cols(); ++i) {
    double sum = 0.0;
    for (Index j = 0; j < w_.rows(); ++j) {
      const double wji = w_(j, i);
      if (!(wji > 0.0) || !std::isfinite(wji)) {
        throw ArgumentError("weight w(" + std::to_string(j) + "," + std::to_string(i) +
                            ") is not strictly positive");
      }
      sum += wji;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ArgumentError("weights at index " + std::to_string(i) + " sum to " +
                          std::to_string(sum) + ", expected 1");
    }
  }
}

WeightSet WeightSet::l1(Index num_side_info, Index n, double slack) {
  if (num_side_info < 0 || n < 1) throw DimensionError("invalid weight set shape");
  WeightSet ws;
  ws.w_ = Eigen::MatrixXd::Constant(num_side_info + 1, n, slack);
  ws.w_.row(0).setConstant(1.0 - static_cast<double>(num_side_info) * slack);
  return ws;
}

WeightSet WeightSet::l1l1(Index num_side_info, Index n, double slack) {
  if (num_side_info < 1) {
    throw ArgumentError("l1-l1 weights need at least one side information signal");
  }
  if (n < 1) throw DimensionError("invalid weight set shape");
  WeightSet ws;
  ws.w_ = Eigen::MatrixXd::Constant(num_side_info + 1, n, slack);
  const double half = 0.5 - 0.5 * static_cast<double>(num_side_info - 1) * slack;
  ws.w_.row(0).setConstant(half);
  ws.w_.row(1).setConstant(half);
  return ws;
}

void update_weights_into(const Vector& x, const SideInformationEnsemble& ensemble,
                         double epsilon, Eigen::MatrixXd& out) {
  const Index n = x.size();
  const Index rows = ensemble.count() + 1;
  for (Index i = 0; i < n; ++i) {
    double* col = out.col(i).data();
    double total = 0.0;
    for (Index j = 0; j < rows; ++j) {
      col[j] = 1.0 / (std::abs(x[i] - ensemble.value(j, i)) + epsilon);
      total += col[j];
    }
    const double eta = 1.0 / total;
    for (Index j = 0; j < rows; ++j) col[j] *= eta;
  }
}

WeightSet update_weights(const SignalVector& x, const SideInformationEnsemble& ensemble,
                         double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  if (x.size() != ensemble.dimension()) {
    throw DimensionError("update_weights: signal length does not match side information");
  }
  Eigen::MatrixXd w(ensemble.count() + 1, x.size());
  update_weights_into(x.values(), ensemble, epsilon, w);
  return WeightSet(std::move(w));
}

}  // namespace ramsi
