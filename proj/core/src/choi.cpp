#include "ruo/choi.hpp"

#include <cmath>
#include <string>

#include "ruo/asymptotics.hpp"
#include "ruo/errors.hpp"

namespace ruo {

namespace {

Eigen::Index square_root_dim(const ComplexMatrix& m, const char* what) {
  require_square(m, what);
  const auto n = m.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || d * d != n) {
    throw ShapeError(std::string(what) + ": size " + std::to_string(n) + " is not a positive perfect square");
  }
  return d;
}

}  // namespace

DynamicalMatrix::DynamicalMatrix(ComplexMatrix matrix) : dim_(0), matrix_(std::move(matrix)) {
  dim_ = static_cast<std::size_t>(square_root_dim(matrix_, "DynamicalMatrix"));
}

ComplexMatrix reshuffle(const ComplexMatrix& m) {
  const Eigen::Index d = square_root_dim(m, "reshuffle");
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index e = 0; e < d; ++e) out(a * d + b, c * d + e) = m(a * d + c, b * d + e);
      }
    }
  }
  return out;
}

DynamicalMatrix reshuffle(const Superoperator& s) { return DynamicalMatrix(reshuffle(s.matrix())); }

Superoperator reshuffle(const DynamicalMatrix& dm) { return Superoperator(reshuffle(dm.matrix())); }

ComplexMatrix partial_trace(const ComplexMatrix& c, Subsystem traced) {
  const Eigen::Index d = square_root_dim(c, "partial_trace");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex sum{};
      for (Eigen::Index k = 0; k < d; ++k) {
        sum += traced == Subsystem::B ? c(i * d + k, j * d + k) : c(k * d + i, k * d + j);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const DynamicalMatrix& dm, Subsystem traced) { return partial_trace(dm.matrix(), traced); }

ChoiAudit audit(const DynamicalMatrix& dm, const ChoiTolerances& tol) {
  ChoiAudit r;
  const ComplexMatrix& d = dm.matrix();
  const ComplexMatrix id = identity(dm.dim());
  r.hermiticity_residual = hermiticity_residual(d);
  r.trace_a_residual = (partial_trace(d, Subsystem::A) - id).norm();
  r.trace_b_residual = (partial_trace(d, Subsystem::B) - id).norm();
  r.min_eigenvalue = min_hermitian_eigenvalue(d);
  r.hermitian = r.hermiticity_residual <= tol.hermiticity;
  r.trace_preserving = r.trace_a_residual <= tol.partial_trace;
  r.unital = r.trace_b_residual <= tol.partial_trace;
  r.completely_positive = r.min_eigenvalue >= -tol.positivity;
  return r;
}

DynamicalMatrix choi_of_asymptotic(const AttractorSpace& space, std::int64_t n) {
  const auto d2 = static_cast<Eigen::Index>(space.dim() * space.dim());
  ComplexMatrix m = ComplexMatrix::Zero(d2, d2);
  for (const auto& b : space.blocks()) {
    const Complex w = unit_power(b.lambda, n);
    for (const auto& x : b.basis) m += w * kron(x, x.conjugate());
  }
  return DynamicalMatrix(std::move(m));
}

Complex positivity_functional(const AttractorSpace& space, const ComplexMatrix& a) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != space.dim()) {
    throw ShapeError("positivity_functional: operator dimension mismatch");
  }
  Complex sum{};
  for (const auto& b : space.blocks()) {
    for (const auto& x : b.basis) sum += b.lambda * (a.adjoint() * x * a * x.adjoint()).trace();
  }
  return sum;
}

}  // namespace ruo
