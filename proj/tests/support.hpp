#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ruo/channel.hpp"
#include "ruo/io.hpp"
#include "ruo/matrix.hpp"
#include "ruo/random.hpp"

namespace ruo::testing {

inline std::string data_path(const std::string& name) { return std::string(RUO_DATA_DIR) + "/" + name; }

inline UnitaryEnsemble cnot_ensemble(double p1 = 0.5) { return to_ensemble(builtin("cnot_pair", p1)); }

inline UnitaryEnsemble single(const ComplexMatrix& u) { return validate_ensemble({{1.0, u}}); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline ComplexMatrix projector(std::size_t d, std::size_t k) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(k, k) = 1.0;
  return m;
}

// The five lambda = 1 and the single lambda = -1 attractors of the CNOT pair,
// written out in the computational basis.
inline std::vector<ComplexMatrix> cnot_plus_basis() {
  const double s3 = 1.0 / std::sqrt(3.0), s6 = 1.0 / std::sqrt(6.0);
  std::vector<ComplexMatrix> x(5, ComplexMatrix::Zero(4, 4));
  x[0](0, 0) = 1.0;
  for (int i = 1; i < 4; ++i) {
    for (int j = 1; j < 4; ++j) {
      if (i != j) x[1](i, j) = s6;
    }
    x[2](0, i) = s3;
    x[3](i, 0) = s3;
    x[4](i, i) = s3;
  }
  return x;
}

inline ComplexMatrix cnot_minus_basis() {
  ComplexMatrix x = ComplexMatrix::Zero(4, 4);
  const double s6 = 1.0 / std::sqrt(6.0);
  x(1, 2) = -s6;
  x(1, 3) = s6;
  x(2, 1) = s6;
  x(2, 3) = -s6;
  x(3, 1) = -s6;
  x(3, 2) = s6;
  return x;
}

// Closed-form CNOT limit for even (odd = false) or odd step counts.
inline ComplexMatrix cnot_limit(const ComplexMatrix& r, bool odd) {
  const Complex a = r(0, 0);
  const Complex b = (r(1, 1) + r(2, 2) + r(3, 3)) / 3.0;
  const Complex c = (r(0, 1) + r(0, 2) + r(0, 3)) / 3.0;
  Complex d = (r(1, 2) + r(2, 3) + std::conj(r(1, 3))) / 3.0;
  Complex ds = std::conj(d);
  if (odd) std::swap(d, ds);
  ComplexMatrix m(4, 4);
  m << a, c, c, c,
       std::conj(c), b, d, ds,
       std::conj(c), ds, b, d,
       std::conj(c), d, ds, b;
  return m;
}

inline UnitaryEnsemble random_ensemble(std::size_t d, std::size_t members, Rng& rng) {
  std::vector<EnsembleMember> raw;
  double total = 0.0;
  std::vector<double> weights;
  for (std::size_t i = 0; i < members; ++i) {
    weights.push_back(0.1 + rng.uniform());
    total += weights.back();
  }
  for (std::size_t i = 0; i < members; ++i) raw.push_back({weights[i] / total, random_unitary(d, rng)});
  return validate_ensemble(std::move(raw), {.probability_sum_tol = 1e-12});
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace ruo::testing
