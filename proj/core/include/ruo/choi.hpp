#pragma once

// Dynamical (Choi) matrices obtained by reshuffling a superoperator:
//   D[(m, n), (mu, nu)] = S[(m, mu), (n, nu)]
// with composite indices flattened row-major, (a, b) -> a * d + b.

#include <cstdint>

#include "ruo/attractors.hpp"
#include "ruo/channel.hpp"

namespace ruo {

class DynamicalMatrix {
 public:
  /// Throws ShapeError unless the matrix is d^2 x d^2.
  explicit DynamicalMatrix(ComplexMatrix matrix);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  std::size_t dim_;
  ComplexMatrix matrix_;
};

/// Exact index permutation; an involution.
ComplexMatrix reshuffle(const ComplexMatrix& m);
DynamicalMatrix reshuffle(const Superoperator& s);
Superoperator reshuffle(const DynamicalMatrix& dm);

enum class Subsystem { A, B };

/// Traces out the given factor of H_A (x) H_B:
///   traced = B: C^A_{mn}   = sum_mu C[(m, mu), (n, mu)]
///   traced = A: C^B_{mu nu} = sum_m C[(m, mu), (m, nu)]
ComplexMatrix partial_trace(const ComplexMatrix& c, Subsystem traced);
ComplexMatrix partial_trace(const DynamicalMatrix& dm, Subsystem traced);

struct ChoiTolerances {
  double hermiticity = 1e-10;
  double partial_trace = 1e-9;
  double positivity = 1e-9;  // CP iff min eigenvalue >= -positivity
};

struct ChoiAudit {
  double hermiticity_residual = 0.0;  // ||D - D^dagger||
  double trace_a_residual = 0.0;      // ||Tr_A D - I||
  double trace_b_residual = 0.0;      // ||Tr_B D - I||
  double min_eigenvalue = 0.0;        // of (D + D^dagger) / 2
  bool hermitian = false;
  bool trace_preserving = false;
  bool unital = false;
  bool completely_positive = false;

  bool passed() const { return hermitian && trace_preserving && unital && completely_positive; }
};

/// Report-only: never modifies D.
ChoiAudit audit(const DynamicalMatrix& dm, const ChoiTolerances& tol = {});

/// sum lambda^n X (x) conj(X), assembled directly from the attractor basis.
DynamicalMatrix choi_of_asymptotic(const AttractorSpace& space, std::int64_t n);

/// sum lambda Tr(A^dagger X A X^dagger); real and >= 0 for a CP Phi_ass.
Complex positivity_functional(const AttractorSpace& space, const ComplexMatrix& a);

}  // namespace ruo
