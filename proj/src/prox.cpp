#include "ramsi/prox.hpp"

#include <cassert>
#include <cmath>

namespace ramsi {

namespace {

// Sort by z and merge equal z values; returns the merged count.
std::size_t canonicalize(std::span<Anchor> anchors) {
  for (std::size_t a = 1; a < anchors.size(); ++a) {
    const Anchor key = anchors[a];
    std::size_t b = a;
    while (b > 0 && anchors[b - 1].z > key.z) {
      anchors[b] = anchors[b - 1];
      --b;
    }
    anchors[b] = key;
  }
  std::size_t k = 0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    if (k > 0 && anchors[k - 1].z == anchors[a].z) {
      anchors[k - 1].weight += anchors[a].weight;
    } else {
      anchors[k++] = anchors[a];
    }
  }
  return k;
}

}  // namespace

double prox_element(double x, std::span<Anchor> anchors, double step) {
  assert(!anchors.empty());
  const std::size_t k = canonicalize(anchors);

  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) total += anchors[a].weight;

  // `shift` is step times the penalty slope on the open interval left of
  // anchor l. The thresholds z_l + shift tile the real line, so exactly one
  // of the two tests below fires for some l (or x lies right of every anchor).
  double shift = -step * total;
  for (std::size_t l = 0; l < k; ++l) {
    const double z = anchors[l].z;
    if (x < z + shift) return x - shift;
    const double next = shift + 2.0 * step * anchors[l].weight;
    if (x <= z + next) return z;
    shift = next;
  }
  return x - shift;
}

double prox_element(const ProxElementInput& input) {
  if (!(input.step > 0.0) || !std::isfinite(input.step)) {
    throw ArgumentError("prox step must be positive");
  }
  if (input.anchors.empty()) throw ArgumentError("prox needs at least one anchor");
  for (const Anchor& a : input.anchors) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw ArgumentError("prox anchor weights must be positive");
    }
    if (!std::isfinite(a.z)) throw ArgumentError("prox anchor is not finite");
  }
  if (!std::isfinite(input.x)) throw ArgumentError("prox input is not finite");
  std::vector<Anchor> anchors = input.anchors;
  return prox_element(input.x, anchors, input.step);
}

void prox_vector_into(const Vector& x, const SideInformationEnsemble& ensemble,
                      const Eigen::MatrixXd& weights, double step, Vector& out) {
  const Index rows = ensemble.count() + 1;
  std::vector<Anchor> scratch(static_cast<std::size_t>(rows));
  for (Index i = 0; i < x.size(); ++i) {
    for (Index j = 0; j < rows; ++j) {
      scratch[static_cast<std::size_t>(j)] = Anchor{ensemble.value(j, i), weights(j, i)};
    }
    out[i] = prox_element(x[i], scratch, step);
  }
}

SignalVector prox_vector(const SignalVector& x, const SideInformationEnsemble& ensemble,
                         const WeightSet& weights, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("prox step must be positive");
  if (x.size() != ensemble.dimension() || weights.dimension() != x.size() ||
      weights.num_side_info() != ensemble.count()) {
    throw DimensionError("prox_vector: signal, side information and weights disagree");
  }
  Vector out(x.size());
  prox_vector_into(x.values(), ensemble, weights.matrix(), step, out);
  return SignalVector(std::move(out));
}

}  // namespace ramsi
