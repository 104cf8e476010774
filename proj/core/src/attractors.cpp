#include "ruo/attractors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "ruo/errors.hpp"

namespace ruo {

namespace {

std::string fmt_e(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fmt_lambda(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6f%+.6fi)", z.real(), z.imag());
  return buf;
}

void require_unit(Complex lambda, double tol, const char* what) {
  if (std::abs(std::abs(lambda) - 1.0) > tol) {
    throw ParameterError(std::string(what) + ": |lambda| = " + std::to_string(std::abs(lambda)) +
                         " is not on the unit circle");
  }
}

std::vector<ComplexMatrix> columns_to_operators(const ComplexMatrix& cols) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(cols.cols()));
  for (Eigen::Index k = 0; k < cols.cols(); ++k) ops.push_back(unvec(ComplexVector(cols.col(k))));
  return ops;
}

std::vector<ComplexMatrix> orthonormal_with_phase(const std::vector<ComplexMatrix>& ops) {
  auto basis = gram_schmidt_hs(ops);
  for (auto& x : basis) normalize_phase(x);
  return basis;
}

}  // namespace

std::optional<RootOfUnity> snap_root_of_unity(Complex lambda, int max_order, double tol) {
  const double phase = phase_0_2pi(lambda);
  for (int q = 1; q <= max_order; ++q) {
    int p = static_cast<int>(std::lround(phase * q / (2.0 * std::numbers::pi))) % q;
    const Complex root = std::polar(1.0, 2.0 * std::numbers::pi * p / q);
    if (std::abs(lambda - root) <= tol) return RootOfUnity{p, q};
  }
  return std::nullopt;
}

std::size_t UnitSpectrum::total_multiplicity() const {
  std::size_t n = 0;
  for (const auto& v : values) n += v.multiplicity;
  return n;
}

UnitSpectrum unit_spectrum(const Superoperator& s, const AttractorOptions& opts) {
  const std::vector<Complex> all = eigenvalues(s.matrix());
  return unit_spectrum(s, all, opts);
}

UnitSpectrum unit_spectrum(const Superoperator& s, std::span<const Complex> eigenvalues,
                           const AttractorOptions& opts) {
  std::vector<Complex> candidates;
  for (Complex z : eigenvalues) {
    if (std::abs(z) >= 1.0 - opts.unit_circle_tol) candidates.push_back(z);
  }

  // Single-linkage clustering within the radius.
  std::vector<std::size_t> parent(candidates.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (std::abs(candidates[i] - candidates[j]) <= opts.cluster_radius) parent[root(j)] = root(i);
    }
  }

  std::vector<std::vector<Complex>> groups;
  std::vector<std::size_t> group_of(candidates.size(), SIZE_MAX);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t r = root(i);
    if (group_of[r] == SIZE_MAX) {
      group_of[r] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[r]].push_back(candidates[i]);
  }

  UnitSpectrum spectrum;
  const Eigen::Index n = s.matrix().rows();
  for (auto& raw : groups) {
    Complex centroid = std::accumulate(raw.begin(), raw.end(), Complex{}) / static_cast<double>(raw.size());
    const Complex lambda = centroid / std::abs(centroid);
    const ComplexMatrix shifted = s.matrix() - lambda * ComplexMatrix::Identity(n, n);
    const auto mult = static_cast<std::size_t>(nullspace(shifted, opts.nullspace_tol).cols());
    spectrum.values.push_back({lambda, mult, std::move(raw), snap_root_of_unity(lambda, opts.max_root_order, opts.root_tol)});
  }
  std::sort(spectrum.values.begin(), spectrum.values.end(), [](const UnitEigenvalue& a, const UnitEigenvalue& b) {
    return phase_0_2pi(a.lambda) < phase_0_2pi(b.lambda);
  });
  return spectrum;
}

std::vector<ComplexMatrix> commutant_basis(const UnitaryEnsemble& e, Complex lambda, const AttractorOptions& opts) {
  require_unit(lambda, opts.unit_circle_tol, "commutant_basis");
  const auto d = static_cast<Eigen::Index>(e.dim());
  const Eigen::Index n = d * d;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  // vec(U X) = (U (x) I) vec X and vec(X U) = (I (x) U^T) vec X.
  ComplexMatrix stacked(n * static_cast<Eigen::Index>(e.size()), n);
  Eigen::Index row = 0;
  for (const auto& m : e.members()) {
    stacked.middleRows(row, n) = kron(m.unitary, id) - lambda * kron(id, m.unitary.transpose());
    row += n;
  }
  return orthonormal_with_phase(columns_to_operators(nullspace(stacked, opts.nullspace_tol)));
}

std::vector<ComplexMatrix> kernel_basis(const Superoperator& s, Complex lambda, const AttractorOptions& opts) {
  require_unit(lambda, opts.unit_circle_tol, "kernel_basis");
  const Eigen::Index n = s.matrix().rows();
  const ComplexMatrix shifted = s.matrix() - lambda * ComplexMatrix::Identity(n, n);
  return orthonormal_with_phase(columns_to_operators(nullspace(shifted, opts.nullspace_tol)));
}

AttractorSpace::AttractorSpace(std::size_t dim, std::vector<AttractorBlock> blocks)
    : dim_(dim), blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    for (const auto& x : b.basis) {
      if (static_cast<std::size_t>(x.rows()) != dim_ || static_cast<std::size_t>(x.cols()) != dim_) {
        throw ShapeError("AttractorSpace: basis element is not " + std::to_string(dim_) + "x" + std::to_string(dim_));
      }
    }
  }
}

std::size_t AttractorSpace::total_dim() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.basis.size();
  return n;
}

const AttractorBlock* AttractorSpace::find(Complex lambda, double radius) const {
  for (const auto& b : blocks_) {
    if (std::abs(b.lambda - lambda) <= radius) return &b;
  }
  return nullptr;
}

AttractorSpace build_attractor_space(const UnitaryEnsemble& e, const AttractorOptions& opts) {
  const Superoperator s = superoperator(e);
  return build_attractor_space(e, s, unit_spectrum(s, opts), opts);
}

AttractorSpace build_attractor_space(const UnitaryEnsemble& e, const Superoperator& s, const UnitSpectrum& spectrum,
                                     const AttractorOptions& opts) {

  std::vector<AttractorBlock> blocks;
  std::vector<ComplexMatrix> all;
  std::vector<std::size_t> sizes;
  for (const auto& u : spectrum.values) {
    auto commutant = commutant_basis(e, u.lambda, opts);
    const auto kernel = kernel_basis(s, u.lambda, opts);
    const double angle = max_principal_angle(commutant, kernel);
    if (commutant.size() != kernel.size() || angle > opts.structure_mismatch_tol) {
      throw ConsistencyError("attractor block at lambda=" + fmt_lambda(u.lambda) + ": commutant dimension " +
                             std::to_string(commutant.size()) + ", kernel dimension " +
                             std::to_string(kernel.size()) + ", principal angle " + fmt_e(angle));
    }
    sizes.push_back(commutant.size());
    all.insert(all.end(), commutant.begin(), commutant.end());
    blocks.push_back({u.lambda, u.root, {}, angle});
  }

  // Removes the roundoff-level overlap between blocks.
  auto global = gram_schmidt_hs(all);
  if (global.size() != all.size()) {
    throw ConsistencyError("attractor blocks are linearly dependent across eigenvalues");
  }
  std::size_t offset = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t k = 0; k < sizes[b]; ++k) {
      ComplexMatrix x = std::move(global[offset + k]);
      normalize_phase(x);
      blocks[b].basis.push_back(std::move(x));
    }
    offset += sizes[b];
  }
  return AttractorSpace(e.dim(), std::move(blocks));
}

CheckReport check_trace_property(const AttractorSpace& space, double tol) {
  CheckReport r{"trace_property", 0.0, tol, {}};
  for (const auto& b : space.blocks()) {
    if (std::abs(b.lambda - 1.0) <= 1e-8) continue;
    for (std::size_t i = 0; i < b.basis.size(); ++i) {
      const double tr = std::abs(b.basis[i].trace());
      r.worst = std::max(r.worst, tr);
      if (tr > tol) r.violations.push_back("lambda=" + fmt_lambda(b.lambda) + " element " + std::to_string(i) +
                                           ": |Tr X| = " + fmt_e(tr));
    }
  }
  return r;
}

bool DiagonalizabilityReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const RankVerdict& v) { return v.passed(); });
}

DiagonalizabilityReport check_diagonalizability(const Superoperator& s, const UnitSpectrum& spectrum,
                                                const AttractorOptions& opts) {
  DiagonalizabilityReport report;
  const Eigen::Index n = s.matrix().rows();
  for (const auto& u : spectrum.values) {
    const ComplexMatrix shifted = s.matrix() - u.lambda * ComplexMatrix::Identity(n, n);
    const ComplexMatrix squared = shifted * shifted;
    report.verdicts.push_back(
        {u.lambda, numerical_rank(shifted, opts.nullspace_tol), numerical_rank(squared, opts.nullspace_tol)});
  }
  return report;
}

CheckReport check_closure(const AttractorSpace& space, double tol) {
  CheckReport r{"closure", 0.0, tol, {}};
  const auto& blocks = space.blocks();
  for (const auto& a : blocks) {
    for (std::size_t i = 0; i < a.basis.size(); ++i) {
      const ComplexMatrix& xa = a.basis[i];

      const ComplexMatrix adj = xa.adjoint();
      const AttractorBlock* conj_block = space.find(std::conj(a.lambda));
      const double adj_res = conj_block ? projection_residual(adj, conj_block->basis) : adj.norm();
      r.worst = std::max(r.worst, adj_res);
      if (adj_res > tol) {
        r.violations.push_back("adjoint of lambda=" + fmt_lambda(a.lambda) + " element " + std::to_string(i) +
                               " leaves the conjugate block, residual " + fmt_e(adj_res));
      }

      for (const auto& b : blocks) {
        const AttractorBlock* target = space.find(a.lambda * b.lambda);
        for (std::size_t j = 0; j < b.basis.size(); ++j) {
          const ComplexMatrix prod = xa * b.basis[j];
          const double res = target ? projection_residual(prod, target->basis) : prod.norm();
          r.worst = std::max(r.worst, res);
          if (res > tol) {
            r.violations.push_back("product of lambda=" + fmt_lambda(a.lambda) + "[" + std::to_string(i) +
                                   "] and lambda=" + fmt_lambda(b.lambda) + "[" + std::to_string(j) +
                                   "], residual " + fmt_e(res));
          }
        }
      }
    }
  }
  return r;
}

CheckReport check_commutation(const UnitaryEnsemble& e, const AttractorSpace& space, double tol) {
  CheckReport r{"commutation", 0.0, tol, {}};
  for (const auto& b : space.blocks()) {
    for (std::size_t k = 0; k < b.basis.size(); ++k) {
      const ComplexMatrix& x = b.basis[k];
      for (std::size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix& u = e.members()[i].unitary;
        const double res = (u * x - b.lambda * x * u).norm();
        r.worst = std::max(r.worst, res);
        if (res > tol) {
          r.violations.push_back("lambda=" + fmt_lambda(b.lambda) + " element " + std::to_string(k) + ", U_" +
                                 std::to_string(i) + ": residual " + fmt_e(res));
        }
      }
    }
  }
  return r;
}

CheckReport check_orthonormality(const AttractorSpace& space, double tol) {
  CheckReport r{"orthonormality", 0.0, tol, {}};
  std::vector<ComplexMatrix> all;
  for (const auto& b : space.blocks()) all.insert(all.end(), b.basis.begin(), b.basis.end());
  if (all.empty()) return r;
  const ComplexMatrix cols = as_columns(all);
  const ComplexMatrix gram = cols.adjoint() * cols;
  r.worst = (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (r.worst > tol) r.violations.push_back("Gram matrix deviates from identity by " + fmt_e(r.worst));
  return r;
}

CheckReport check_unitality_resolution(const AttractorSpace& space, double tol) {
  CheckReport r{"unitality_resolution", 0.0, tol, {}};
  const auto d = static_cast<Eigen::Index>(space.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  if (const AttractorBlock* one = space.find(Complex(1.0, 0.0))) {
    for (const auto& x : one->basis) sum += std::conj(x.trace()) * x;
  }
  r.worst = (sum - ComplexMatrix::Identity(d, d)).norm();
  if (r.worst > tol) r.violations.push_back("sum Tr(X^dagger) X differs from I by " + fmt_e(r.worst));
  return r;
}

CheckReport check_structure(const UnitaryEnsemble& e, const Superoperator& s, const UnitSpectrum& spectrum,
                            double tol, const AttractorOptions& opts) {
  CheckReport r{"structure", 0.0, tol, {}};
  for (const auto& u : spectrum.values) {
    const auto commutant = commutant_basis(e, u.lambda, opts);
    const auto kernel = kernel_basis(s, u.lambda, opts);
    const double angle = max_principal_angle(commutant, kernel);
    r.worst = std::max(r.worst, angle);
    if (commutant.size() != kernel.size() || angle > tol) {
      r.violations.push_back("lambda=" + fmt_lambda(u.lambda) + ": commutant dim " + std::to_string(commutant.size()) +
                             ", kernel dim " + std::to_string(kernel.size()) + ", angle " + fmt_e(angle));
    }
  }
  return r;
}

CheckReport check_spectral_radius(const Superoperator& s, double tol) {
  const std::vector<Complex> all = eigenvalues(s.matrix());
  return check_spectral_radius(all, tol);
}

CheckReport check_spectral_radius(std::span<const Complex> eigenvalues, double tol) {
  CheckReport r{"spectral_radius", 0.0, 1.0 + tol, {}};
  double largest = 0.0;
  for (Complex z : eigenvalues) largest = std::max(largest, std::abs(z));
  r.worst = largest;
  if (largest > 1.0 + tol) r.violations.push_back("eigenvalue modulus " + fmt_e(largest) + " exceeds 1");
  return r;
}

}  // namespace ruo
