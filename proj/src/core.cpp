#include "ramsi/core.hpp"

#include <cmath>
#include <random>
#include <string>

namespace ramsi {

SideInformationEnsemble::SideInformationEnsemble(Index n, std::vector<SignalVector> signals)
    : n_(n), signals_(std::move(signals)) {
  if (n_ < 1) {
    throw DimensionError("side information dimension must be positive");
  }
  for (std::size_t j = 0; j < signals_.size(); ++j) {
    if (signals_[j].size() != n_) {
      throw DimensionError("side information z" + std::to_string(j + 1) + " has length " +
                           std::to_string(signals_[j].size()) + ", expected " +
                           std::to_string(n_));
    }
  }
}

const SignalVector& SideInformationEnsemble::signal(Index j) const {
  if (j < 1 || j > count()) {
    throw ArgumentError("side information index " + std::to_string(j) + " out of range 1.." +
                        std::to_string(count()));
  }
  return signals_[static_cast<std::size_t>(j - 1)];
}

SideInformationEnsemble SideInformationEnsemble::truncated(Index j_used) const {
  if (j_used < 0 || j_used > count()) {
    throw ArgumentError("cannot use " + std::to_string(j_used) + " of " +
                        std::to_string(count()) + " side information signals");
  }
  return SideInformationEnsemble(
      n_, std::vector<SignalVector>(signals_.begin(), signals_.begin() + j_used));
}

SensingMatrix::SensingMatrix(RowMajorMatrix entries, std::uint64_t seed)
    : entries_(std::move(entries)), seed_(seed) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DimensionError("sensing matrix must have at least one row and column");
  }
  if (entries_.rows() > entries_.cols()) {
    throw DimensionError("sensing matrix has more rows (" + std::to_string(entries_.rows()) +
                         ") than columns (" + std::to_string(entries_.cols()) + ")");
  }
  if (!entries_.allFinite()) {
    throw ArgumentError("sensing matrix has non-finite entries");
  }
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("lambda must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ArgumentError("epsilon must be positive");
  if (!(rel_tol > 0.0)) throw ArgumentError("rel_tol must be positive");
  if (max_iters < 1) throw ArgumentError("max_iters must be at least 1");
  if (stall_iters < 1) throw ArgumentError("stall_iters must be at least 1");
  if (lipschitz_override && !(*lipschitz_override > 0.0)) {
    throw ArgumentError("Lipschitz override must be positive");
  }
}

SensingMatrix generate_sensing_matrix(std::uint64_t seed, Index m, Index n) {
  if (m < 1 || n < 1) {
    throw DimensionError("sensing matrix dimensions must be positive (m=" + std::to_string(m) +
                         ", n=" + std::to_string(n) + ")");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  RowMajorMatrix entries(m, n);
  for (Index k = 0; k < entries.size(); ++k) {
    entries.data()[k] = gauss(rng);
  }
  return SensingMatrix(std::move(entries), seed);
}

MeasurementVector apply(const SensingMatrix& a, const SignalVector& x) {
  if (x.size() != a.cols()) {
    throw DimensionError("apply: signal length " + std::to_string(x.size()) +
                         " does not match matrix columns " + std::to_string(a.cols()));
  }
  return MeasurementVector(a.entries() * x.values());
}

SignalVector apply_adjoint(const SensingMatrix& a, const MeasurementVector& r) {
  if (r.size() != a.rows()) {
    throw DimensionError("apply_adjoint: measurement length " + std::to_string(r.size()) +
                         " does not match matrix rows " + std::to_string(a.rows()));
  }
  return SignalVector(a.entries().transpose() * r.values());
}

double lipschitz_constant(const SensingMatrix& a, double tol, int max_iters) {
  if (!(tol > 0.0)) throw ArgumentError("lipschitz_constant: tol must be positive");
  const auto& mat = a.entries();

  // Fixed start vector so the estimate is reproducible.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  Vector v(mat.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
  v.normalize();

  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = mat.transpose() * (mat * v);
    const double rayleigh = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(rayleigh - estimate) <= tol * rayleigh) {
      return 1.01 * rayleigh;
    }
    estimate = rayleigh;
  }
  throw NumericError("power iteration did not converge in " + std::to_string(max_iters) +
                         " iterations",
                     1.01 * estimate);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace ramsi
