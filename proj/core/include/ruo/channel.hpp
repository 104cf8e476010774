#pragma once

// Random unitary operations  rho -> sum_i p_i U_i rho U_i^dagger.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ruo/matrix.hpp"

namespace ruo {

struct EnsembleMember {
  double probability = 0.0;
  ComplexMatrix unitary;
};

struct EnsembleLimits {
  std::size_t max_dim = 64;  // superoperator is max_dim^2 x max_dim^2
  double probability_sum_tol = 1e-12;
  double unitarity_tol = 1e-10;  // scaled by sqrt(d)
};

/// Validated ensemble {(p_i, U_i)}: p_i in (0, 1], sum p_i = 1, U_i unitary,
/// all of one dimension. Probabilities are never renormalized.
class UnitaryEnsemble {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  std::span<const EnsembleMember> members() const { return members_; }

  friend UnitaryEnsemble validate_ensemble(std::vector<EnsembleMember> raw, const EnsembleLimits& limits);

 private:
  UnitaryEnsemble(std::size_t dim, std::vector<EnsembleMember> members)
      : dim_(dim), members_(std::move(members)) {}

  std::size_t dim_;
  std::vector<EnsembleMember> members_;
};

/// Throws ValidationError listing every violated invariant.
UnitaryEnsemble validate_ensemble(std::vector<EnsembleMember> raw, const EnsembleLimits& limits = {});

struct DensityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double positivity = 1e-10;
};

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  /// Throws ValidationError if any invariant fails.
  explicit DensityMatrix(ComplexMatrix m, const DensityTolerances& tol = {});

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// d^2 x d^2 matrix of a linear map acting on row-major vectorized operators.
class Superoperator {
 public:
  /// Throws ShapeError unless the matrix is n x n with n a perfect square.
  explicit Superoperator(ComplexMatrix matrix);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  ComplexMatrix apply(const ComplexMatrix& a) const;
  /// this after other, i.e. matrix() * other.matrix().
  Superoperator then_after(const Superoperator& other) const;
  /// Non-negative integer power by repeated squaring.
  Superoperator power(std::uint64_t n) const;

  /// || S vec(I) - vec(I) ||.
  double unitality_residual() const;
  /// Operator norm induced by the HS norm (largest singular value).
  double induced_norm() const;

 private:
  std::size_t dim_;
  ComplexMatrix matrix_;
};

ComplexMatrix apply_channel(const UnitaryEnsemble& e, const ComplexMatrix& a);

/// rho -> sum_i p_i U_i^dagger A U_i.
ComplexMatrix apply_adjoint(const UnitaryEnsemble& e, const ComplexMatrix& a);

/// sum_i p_i U_i (x) conj(U_i).
Superoperator superoperator(const UnitaryEnsemble& e);

/// n-fold application of apply_channel to an arbitrary operator.
ComplexMatrix iterate_operator(const UnitaryEnsemble& e, const ComplexMatrix& a, std::int64_t n);

/// Phi^n(rho0) by repeated application; n < 0 is a ParameterError.
DensityMatrix iterate(const UnitaryEnsemble& e, const DensityMatrix& rho0, std::int64_t n);

/// The transpose map A -> A^T as a superoperator (not completely positive).
Superoperator transpose_map(std::size_t d);

}  // namespace ruo
