#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ramsi/error.hpp"

namespace ramsi {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {
struct SignalTag {};
struct MeasurementTag {};
}  // namespace detail

/// Dense real vector with all entries finite. The tag keeps signals (length n)
/// and measurements (length m) from being mixed up.
template <class Tag>
class DenseVector {
 public:
  DenseVector() = default;

  explicit DenseVector(Vector values) : values_(std::move(values)) {
    if (!values_.allFinite()) {
      throw ArgumentError("vector has non-finite entries");
    }
  }

  static DenseVector zeros(Index size) { return DenseVector(Vector::Zero(size)); }

  Index size() const noexcept { return values_.size(); }
  const Vector& values() const noexcept { return values_; }
  double operator[](Index i) const { return values_[i]; }

  friend bool operator==(const DenseVector& a, const DenseVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
};

/// The source x, a side information signal z_j, or a solver iterate.
using SignalVector = DenseVector<detail::SignalTag>;
/// y = A x.
using MeasurementVector = DenseVector<detail::MeasurementTag>;

/// Ordered side information signals z_1..z_J of a common length n.
///
/// The zero anchor z_0 is implicit: value(0, i) is always 0 and signal(0)
/// is not stored.
class SideInformationEnsemble {
 public:
  explicit SideInformationEnsemble(Index n, std::vector<SignalVector> signals = {});

  Index dimension() const noexcept { return n_; }
  /// J, the number of stored signals.
  Index count() const noexcept { return static_cast<Index>(signals_.size()); }
  /// z_j for j in 1..J.
  const SignalVector& signal(Index j) const;
  /// z_ji with z_0i = 0.
  double value(Index j, Index i) const {
    return j == 0 ? 0.0 : signals_[static_cast<std::size_t>(j - 1)][i];
  }
  /// The first `j_used` signals.
  SideInformationEnsemble truncated(Index j_used) const;

 private:
  Index n_;
  std::vector<SignalVector> signals_;
};

/// Dense row-major m x n measurement operator.
class SensingMatrix {
 public:
  /// Throws DimensionError for empty matrices or m > n, ArgumentError for
  /// non-finite entries.
  explicit SensingMatrix(RowMajorMatrix entries, std::uint64_t seed = 0);

  Index rows() const noexcept { return entries_.rows(); }
  Index cols() const noexcept { return entries_.cols(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const RowMajorMatrix& entries() const noexcept { return entries_; }

 private:
  RowMajorMatrix entries_;
  std::uint64_t seed_;
};

struct SolverConfig {
  double lambda = 1e-5;
  double epsilon = 1e-5;
  int max_iters = 100000;
  double rel_tol = 1e-9;
  /// Consecutive iterations the relative change of H must stay below
  /// rel_tol. FISTA is not monotone, and a single small step also happens at
  /// the turning points of an oscillating H. 1 gives the one-step rule.
  int stall_iters = 5;
  std::optional<double> lipschitz_override;

  /// Throws ArgumentError when any field is out of range.
  void validate() const;
};

/// i.i.d. N(0, 1/m) entries, a pure function of (seed, m, n).
SensingMatrix generate_sensing_matrix(std::uint64_t seed, Index m, Index n);

MeasurementVector apply(const SensingMatrix& a, const SignalVector& x);
SignalVector apply_adjoint(const SensingMatrix& a, const MeasurementVector& r);

/// Upper estimate of lambda_max(A^T A): power iteration to relative tolerance
/// `tol`, then a 1.01 safety factor. Throws NumericError if the iteration cap
/// is reached first.
double lipschitz_constant(const SensingMatrix& a, double tol = 1e-6,
                          int max_iters = 10000);

/// splitmix64 finalizer; used to expand (seed, stream) pairs into
/// independent generator seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace ramsi
