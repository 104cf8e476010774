#include "ruo/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "ruo/errors.hpp"

namespace ruo {

namespace {

std::size_t exact_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : 0;
}

bool is_perfect_square(std::size_t n) { return n == 0 || exact_sqrt(n) != 0; }

template <typename Derived>
Eigen::Index first_largest_entry(const Eigen::MatrixBase<Derived>& m) {
  double largest = 0.0;
  for (Eigen::Index k = 0; k < m.size(); ++k) largest = std::max(largest, std::abs(m(k)));
  if (largest == 0.0) return -1;
  // Relative slack keeps the pick stable when several entries tie up to
  // roundoff (e.g. I/sqrt(2)).
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (std::abs(m(k)) >= largest * (1.0 - 1e-9)) return k;
  }
  return -1;
}

template <typename Derived>
void rotate_phase(Eigen::MatrixBase<Derived>& m) {
  const Eigen::Index k = first_largest_entry(m);
  if (k < 0) return;
  const Complex z = m(k);
  m *= std::conj(z) / std::abs(z);
  m(k) = Complex(std::abs(m(k)), 0.0);
}

}  // namespace

OperatorVector::OperatorVector(ComplexVector data) : dim_(0), data_(std::move(data)) {
  const auto n = static_cast<std::size_t>(data_.size());
  if (n == 0 || !is_perfect_square(n)) {
    throw ShapeError("operator vector length " + std::to_string(n) + " is not a positive perfect square");
  }
  dim_ = exact_sqrt(n);
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()));
  }
}

ComplexMatrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return ComplexMatrix::Identity(n, n);
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "hs_inner");
  require_square(b, "hs_inner");
  if (a.rows() != b.rows()) {
    throw ShapeError("hs_inner: dimension mismatch " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
  }
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return (a.conjugate().cwiseProduct(b)).sum();
}

double hs_norm(const ComplexMatrix& a) {
  require_square(a, "hs_norm");
  return a.norm();
}

OperatorVector vec(const ComplexMatrix& a) {
  require_square(a, "vec");
  const Eigen::Index d = a.rows();
  ComplexVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = a(i, j);
  }
  return OperatorVector(std::move(v));
}

ComplexMatrix unvec(const OperatorVector& v) {
  const auto d = static_cast<Eigen::Index>(v.dim());
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = v.data()(i * d + j);
  }
  return a;
}

ComplexMatrix unvec(const ComplexVector& v) { return unvec(OperatorVector(v)); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double default_nullspace_tol(const ComplexMatrix& m) {
  return static_cast<double>(m.cols()) * std::numeric_limits<double>::epsilon();
}

ComplexMatrix nullspace(const ComplexMatrix& m, std::optional<double> tol) {
  const double t = tol.value_or(default_nullspace_tol(m));
  if (!(t >= 0.0)) throw ParameterError("nullspace: tolerance must be >= 0");
  if (!m.allFinite()) throw NumericError("nullspace: non-finite matrix entries");
  const Eigen::Index n = m.cols();
  if (n == 0) return ComplexMatrix(0, 0);
  if (m.rows() == 0) {
    ComplexMatrix basis = ComplexMatrix::Identity(n, n);
    return basis;
  }

  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericError("nullspace: SVD did not converge");
  const Eigen::VectorXd& sv = svd.singularValues();
  const ComplexMatrix& v = svd.matrixV();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;

  // V's trailing columns beyond min(rows, cols) have implicit sigma = 0.
  std::vector<Eigen::Index> picked;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const double sigma = k < sv.size() ? sv(k) : 0.0;
    if (sigma <= t * sigma_max) picked.push_back(k);
  }

  ComplexMatrix basis(n, static_cast<Eigen::Index>(picked.size()));
  for (std::size_t c = 0; c < picked.size(); ++c) {
    ComplexVector col = v.col(picked[c]);
    normalize_phase(col);
    basis.col(static_cast<Eigen::Index>(c)) = col;
  }
  return basis;
}

std::size_t numerical_rank(const ComplexMatrix& m, std::optional<double> tol) {
  const double t = tol.value_or(default_nullspace_tol(m));
  if (!(t >= 0.0)) throw ParameterError("numerical_rank: tolerance must be >= 0");
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success) throw NumericError("numerical_rank: SVD did not converge");
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv(0);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > t * sigma_max) ++rank;
  }
  return rank;
}

double phase_0_2pi(Complex z) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double p = std::arg(z);
  if (p < 0.0) p += two_pi;
  if (p >= two_pi - 1e-12) p = 0.0;
  return p;
}

namespace {

struct SortKey {
  std::int64_t phase_bin;
  double modulus;
};

SortKey sort_key(Complex z) {
  return {static_cast<std::int64_t>(std::llround(phase_0_2pi(z) * 1e9)), std::abs(z)};
}

bool key_less(const SortKey& a, const SortKey& b) {
  if (a.phase_bin != b.phase_bin) return a.phase_bin < b.phase_bin;
  return a.modulus > b.modulus;
}

}  // namespace

std::vector<EigenPair> eig(const ComplexMatrix& m) {
  require_square(m, "eig");
  if (!m.allFinite()) throw NumericError("eig: non-finite matrix entries");
  const Eigen::Index n = m.rows();
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  if (n == 0) return pairs;

  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw NumericError("eig: Schur decomposition did not converge (n=" + std::to_string(n) + ")");
  }
  const ComplexMatrix& t = schur.matrixT();
  const double strict_upper = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  const bool normal = strict_upper <= 1e-12 * std::max(1.0, t.norm());

  if (normal) {
    for (Eigen::Index k = 0; k < n; ++k) {
      ComplexVector v = schur.matrixU().col(k);
      normalize_phase(v);
      pairs.push_back({t(k, k), std::move(v)});
    }
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
    if (es.info() != Eigen::Success) {
      throw NumericError("eig: eigensolver did not converge (n=" + std::to_string(n) + ")");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      ComplexVector v = es.eigenvectors().col(k);
      const double norm = v.norm();
      if (norm > 0.0) v /= norm;
      normalize_phase(v);
      pairs.push_back({es.eigenvalues()(k), std::move(v)});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return key_less(sort_key(a.value), sort_key(b.value)); });
  return pairs;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  if (!m.allFinite()) throw NumericError("eigenvalues: non-finite matrix entries");
  std::vector<Complex> values;
  if (m.rows() == 0) return values;
  Eigen::ComplexSchur<ComplexMatrix> schur(m, false);
  if (schur.info() != Eigen::Success) {
    throw NumericError("eigenvalues: Schur decomposition did not converge (n=" + std::to_string(m.rows()) + ")");
  }
  const ComplexMatrix& t = schur.matrixT();
  for (Eigen::Index k = 0; k < t.rows(); ++k) values.push_back(t(k, k));
  std::stable_sort(values.begin(), values.end(),
                   [](Complex a, Complex b) { return key_less(sort_key(a), sort_key(b)); });
  return values;
}

std::vector<ComplexMatrix> gram_schmidt_hs(std::span<const ComplexMatrix> ops, double drop_tol) {
  std::vector<ComplexMatrix> out;
  if (ops.empty()) return out;
  const Eigen::Index d = ops.front().rows();
  for (const auto& op : ops) {
    require_square(op, "gram_schmidt_hs");
    if (op.rows() != d) throw ShapeError("gram_schmidt_hs: operators of different dimension");
    const double original = op.norm();
    if (original == 0.0) continue;
    ComplexMatrix r = op;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) r -= hs_inner(q, r) * q;
    }
    const double residual = r.norm();
    if (residual <= drop_tol * original) continue;
    out.push_back(r / residual);
  }
  return out;
}

void normalize_phase(ComplexVector& v) { rotate_phase(v); }

void normalize_phase(ComplexMatrix& m) {
  // Row-major scan so "first" matches the vec ordering.
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  Eigen::Map<ComplexVector> flat(rm.data(), rm.size());
  const Eigen::Index k = first_largest_entry(flat);
  if (k < 0) return;
  const Complex z = flat(k);
  m *= std::conj(z) / std::abs(z);
  const Eigen::Index i = k / m.cols();
  const Eigen::Index j = k % m.cols();
  m(i, j) = Complex(std::abs(m(i, j)), 0.0);
}

ComplexMatrix as_columns(std::span<const ComplexMatrix> ops) {
  if (ops.empty()) return ComplexMatrix(0, 0);
  const Eigen::Index n = ops.front().size();
  ComplexMatrix cols(n, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].size() != n) throw ShapeError("as_columns: operators of different dimension");
    cols.col(static_cast<Eigen::Index>(k)) = vec(ops[k]).data();
  }
  return cols;
}

double max_principal_angle(const ComplexMatrix& q1, const ComplexMatrix& q2) {
  if (q1.cols() != q2.cols()) return std::numbers::pi / 2.0;
  if (q1.cols() == 0) return 0.0;
  if (q1.rows() != q2.rows()) throw ShapeError("max_principal_angle: ambient dimensions differ");
  // sin(theta_max) = || (I - Q1 Q1^dagger) Q2 ||_2; better conditioned than
  // acos of the cosines for tiny angles.
  auto sine = [](const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix r = b - a * (a.adjoint() * b);
    Eigen::JacobiSVD<ComplexMatrix> svd(r);
    return svd.singularValues()(0);
  };
  const double s = std::max(sine(q1, q2), sine(q2, q1));
  return std::asin(std::min(1.0, s));
}

double max_principal_angle(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b) {
  if (a.size() != b.size()) return std::numbers::pi / 2.0;
  if (a.empty()) return 0.0;
  return max_principal_angle(as_columns(a), as_columns(b));
}

double projection_residual(const ComplexMatrix& op, std::span<const ComplexMatrix> basis) {
  ComplexMatrix r = op;
  for (const auto& x : basis) r -= hs_inner(x, op) * x;
  return r.norm();
}

double hermiticity_residual(const ComplexMatrix& a) {
  require_square(a, "hermiticity_residual");
  return (a - a.adjoint()).norm();
}

double min_hermitian_eigenvalue(const ComplexMatrix& a) {
  require_square(a, "min_hermitian_eigenvalue");
  if (a.rows() == 0) return 0.0;
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("min_hermitian_eigenvalue: eigensolver did not converge");
  return es.eigenvalues().minCoeff();
}

}  // namespace ruo
