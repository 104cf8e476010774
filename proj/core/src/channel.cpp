#include "ruo/channel.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ruo/errors.hpp"

namespace ruo {

namespace {

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (!std::isfinite(m(k).real()) || !std::isfinite(m(k).imag())) return false;
  }
  return true;
}

void require_dim(const UnitaryEnsemble& e, const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != e.dim()) {
    throw ShapeError(std::string(what) + ": operator is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     ", ensemble dimension is " + std::to_string(e.dim()));
  }
}

}  // namespace

UnitaryEnsemble validate_ensemble(std::vector<EnsembleMember> raw, const EnsembleLimits& limits) {
  std::vector<std::string> violations;
  if (raw.empty()) {
    throw ValidationError({"ensemble has no members"});
  }

  const auto d = static_cast<std::size_t>(raw.front().unitary.rows());
  if (d == 0) violations.push_back("member 0: empty matrix");
  if (d > limits.max_dim) {
    violations.push_back("dimension " + std::to_string(d) + " exceeds the limit " + std::to_string(limits.max_dim));
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& m = raw[i];
    const std::string tag = "member " + std::to_string(i);
    if (!std::isfinite(m.probability)) {
      violations.push_back(tag + ": probability is not finite");
    } else if (m.probability <= 0.0) {
      violations.push_back(tag + ": probability " + fmt_g(m.probability) + " is not positive");
    } else if (m.probability > 1.0) {
      violations.push_back(tag + ": probability " + fmt_g(m.probability) + " exceeds 1");
    }
    sum += m.probability;

    const ComplexMatrix& u = m.unitary;
    if (u.rows() != u.cols()) {
      violations.push_back(tag + ": matrix is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                           ", not square");
      continue;
    }
    if (static_cast<std::size_t>(u.rows()) != d) {
      violations.push_back(tag + ": dimension " + std::to_string(u.rows()) + " differs from " + std::to_string(d));
      continue;
    }
    if (!all_finite(u)) {
      violations.push_back(tag + ": matrix has non-finite entries");
      continue;
    }
    const double defect = (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
    if (defect > limits.unitarity_tol * std::sqrt(static_cast<double>(d))) {
      violations.push_back(tag + ": not unitary, ||U^dagger U - I|| = " + fmt_g(defect));
    }
  }
  if (std::isfinite(sum) && std::abs(sum - 1.0) > limits.probability_sum_tol) {
    violations.push_back("probabilities sum to " + fmt_g(sum));
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));
  return UnitaryEnsemble(d, std::move(raw));
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const DensityTolerances& tol) : matrix_(std::move(m)) {
  std::vector<std::string> violations;
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ValidationError({"density matrix must be square and non-empty"});
  }
  if (!all_finite(matrix_)) throw ValidationError({"density matrix has non-finite entries"});
  const double herm = hermiticity_residual(matrix_);
  if (herm > tol.hermiticity) violations.push_back("not hermitian, ||rho - rho^dagger|| = " + fmt_g(herm));
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    violations.push_back("trace is " + fmt_g(tr.real()) + (tr.imag() != 0.0 ? " + " + fmt_g(tr.imag()) + "i" : ""));
  }
  const double min_eig = min_hermitian_eigenvalue(matrix_);
  if (min_eig < -tol.positivity) violations.push_back("negative eigenvalue " + fmt_g(min_eig));
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Superoperator::Superoperator(ComplexMatrix matrix) : dim_(0), matrix_(std::move(matrix)) {
  require_square(matrix_, "Superoperator");
  const auto n = static_cast<std::size_t>(matrix_.rows());
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || d * d != n) {
    throw ShapeError("Superoperator: size " + std::to_string(n) + " is not a positive perfect square");
  }
  dim_ = d;
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& a) const {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != dim_) {
    throw ShapeError("Superoperator::apply: operator dimension mismatch");
  }
  return unvec(ComplexVector(matrix_ * vec(a).data()));
}

Superoperator Superoperator::then_after(const Superoperator& other) const {
  if (other.dim_ != dim_) throw ShapeError("Superoperator composition: dimension mismatch");
  return Superoperator(matrix_ * other.matrix_);
}

Superoperator Superoperator::power(std::uint64_t n) const {
  ComplexMatrix result = ComplexMatrix::Identity(matrix_.rows(), matrix_.cols());
  ComplexMatrix base = matrix_;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return Superoperator(std::move(result));
}

double Superoperator::unitality_residual() const {
  const ComplexVector id = vec(identity(dim_)).data();
  return (matrix_ * id - id).norm();
}

double Superoperator::induced_norm() const {
  Eigen::BDCSVD<ComplexMatrix> svd(matrix_);
  if (svd.info() != Eigen::Success) throw NumericError("induced_norm: SVD did not converge");
  return svd.singularValues()(0);
}

ComplexMatrix apply_channel(const UnitaryEnsemble& e, const ComplexMatrix& a) {
  require_dim(e, a, "apply_channel");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& m : e.members()) out.noalias() += m.probability * (m.unitary * a * m.unitary.adjoint());
  return out;
}

ComplexMatrix apply_adjoint(const UnitaryEnsemble& e, const ComplexMatrix& a) {
  require_dim(e, a, "apply_adjoint");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& m : e.members()) out.noalias() += m.probability * (m.unitary.adjoint() * a * m.unitary);
  return out;
}

Superoperator superoperator(const UnitaryEnsemble& e) {
  const auto n = static_cast<Eigen::Index>(e.dim() * e.dim());
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (const auto& m : e.members()) s += m.probability * kron(m.unitary, m.unitary.conjugate());
  return Superoperator(std::move(s));
}

ComplexMatrix iterate_operator(const UnitaryEnsemble& e, const ComplexMatrix& a, std::int64_t n) {
  if (n < 0) throw ParameterError("iterate: step count must be >= 0, got " + std::to_string(n));
  require_dim(e, a, "iterate");
  ComplexMatrix x = a;
  for (std::int64_t k = 0; k < n; ++k) x = apply_channel(e, x);
  return x;
}

DensityMatrix iterate(const UnitaryEnsemble& e, const DensityMatrix& rho0, std::int64_t n) {
  return DensityMatrix(iterate_operator(e, rho0.matrix(), n));
}

Superoperator transpose_map(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) s(i * n + j, j * n + i) = 1.0;
  }
  return Superoperator(std::move(s));
}

}  // namespace ruo
