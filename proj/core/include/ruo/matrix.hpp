#pragma once

// Dense complex matrix primitives: Hilbert-Schmidt geometry, row-major
// vectorization, Kronecker products, numerical null spaces and a general
// (non-normal) eigensolver.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ruo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// A d x d operator flattened to length d^2 in row-major order
/// (A11, A12, ..., A1d, A21, ..., Add).
class OperatorVector {
 public:
  /// Throws ShapeError unless data.size() is a perfect square.
  explicit OperatorVector(ComplexVector data);

  std::size_t dim() const { return dim_; }
  const ComplexVector& data() const { return data_; }

 private:
  std::size_t dim_;
  ComplexVector data_;
};

struct EigenPair {
  Complex value;
  ComplexVector vector;  // unit 2-norm, sign-normalized
};

ComplexMatrix identity(std::size_t d);

/// Tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_norm(const ComplexMatrix& a);

OperatorVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const OperatorVector& v);
/// Convenience overload; throws ShapeError for non-square lengths.
ComplexMatrix unvec(const ComplexVector& v);

/// Kronecker product; with row-major vec, vec(A B C) = kron(A, C^T) vec(B).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Default relative tolerance for nullspace(): cols * machine epsilon.
double default_nullspace_tol(const ComplexMatrix& m);

/// Orthonormal basis (as columns) of the right singular directions with
/// sigma <= tol * sigma_max. Columns are ordered by ascending singular value
/// and each is rotated so its first largest-modulus entry is real-positive.
/// A zero matrix has every direction in its null space.
ComplexMatrix nullspace(const ComplexMatrix& m, std::optional<double> tol = {});

/// Number of singular values strictly above tol * sigma_max.
std::size_t numerical_rank(const ComplexMatrix& m, std::optional<double> tol = {});

/// All eigenpairs of a general square matrix, sorted by phase in [0, 2pi)
/// and then by modulus (descending). For numerically normal input the
/// eigenvectors are the Schur vectors, hence orthonormal.
std::vector<EigenPair> eig(const ComplexMatrix& m);

/// Eigenvalues only, same ordering as eig().
std::vector<Complex> eigenvalues(const ComplexMatrix& m);

/// Phase of z mapped into [0, 2pi), with values within 1e-12 of 2pi
/// wrapped to 0 so that 1 - i*eps sorts next to 1.
double phase_0_2pi(Complex z);

/// Modified Gram-Schmidt (two passes) under the HS inner product. Inputs
/// whose residual falls to <= drop_tol of their original norm are dropped.
std::vector<ComplexMatrix> gram_schmidt_hs(std::span<const ComplexMatrix> ops,
                                           double drop_tol = 1e-10);

/// Rotates by a global phase so the first entry of largest modulus is
/// real-positive. Zero input is returned unchanged.
void normalize_phase(ComplexVector& v);
void normalize_phase(ComplexMatrix& m);

/// Stacks vec(op) of each operator as a column.
ComplexMatrix as_columns(std::span<const ComplexMatrix> ops);

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns. Returns pi/2 when the spans differ in
/// dimension; 0 when both are empty.
double max_principal_angle(const ComplexMatrix& q1, const ComplexMatrix& q2);

/// Same, for spans of HS-orthonormal operator lists.
double max_principal_angle(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b);

/// Distance of op from the span of an HS-orthonormal basis.
double projection_residual(const ComplexMatrix& op, std::span<const ComplexMatrix> basis);

/// || A - A^dagger ||_HS.
double hermiticity_residual(const ComplexMatrix& a);

/// Smallest eigenvalue of the hermitian part (A + A^dagger) / 2.
double min_hermitian_eigenvalue(const ComplexMatrix& a);

void require_square(const ComplexMatrix& a, const char* what);

}  // namespace ruo
