#pragma once

// Unit-circle spectrum and attractor space of a random unitary operation,
// plus numerical checks of the structural results about them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ruo/channel.hpp"
#include "ruo/matrix.hpp"

namespace ruo {

struct AttractorOptions {
  double unit_circle_tol = 1e-9;  // 1 - |lambda| <= tol counts as unit modulus
  double cluster_radius = 1e-8;
  // Relative singular-value threshold for the kernel and commutant solves.
  double nullspace_tol = 1e-9;
  // Kernel vs commutant span mismatch above this angle is a ConsistencyError.
  double structure_mismatch_tol = 1e-6;
  int max_root_order = 24;
  double root_tol = 1e-8;
};

/// lambda ~ exp(2 pi i p / q) with 0 <= p < q and gcd(p, q) = 1.
struct RootOfUnity {
  int p = 0;
  int q = 1;
  bool operator==(const RootOfUnity&) const = default;
};

/// Smallest-order root of unity within tol of lambda, if its order is at
/// most max_order. Reported alongside numerical values, never substituted.
std::optional<RootOfUnity> snap_root_of_unity(Complex lambda, int max_order = 24, double tol = 1e-8);

struct UnitEigenvalue {
  Complex lambda;              // cluster centroid projected to |lambda| = 1
  std::size_t multiplicity;    // geometric, dim Ker(S - lambda I)
  std::vector<Complex> raw;    // eigenvalues merged into this cluster
  std::optional<RootOfUnity> root;
};

struct UnitSpectrum {
  std::vector<UnitEigenvalue> values;  // ordered by phase in [0, 2pi)

  std::size_t total_multiplicity() const;
};

UnitSpectrum unit_spectrum(const Superoperator& s, const AttractorOptions& opts = {});
/// Same, reusing eigenvalues(s.matrix()) computed by the caller.
UnitSpectrum unit_spectrum(const Superoperator& s, std::span<const Complex> eigenvalues,
                           const AttractorOptions& opts = {});

/// HS-orthonormal basis of {X : U_i X = lambda X U_i for all i}.
/// Throws ParameterError if |lambda| is not 1 within opts.unit_circle_tol.
std::vector<ComplexMatrix> commutant_basis(const UnitaryEnsemble& e, Complex lambda,
                                           const AttractorOptions& opts = {});

/// HS-orthonormal basis of Ker(S - lambda I).
std::vector<ComplexMatrix> kernel_basis(const Superoperator& s, Complex lambda, const AttractorOptions& opts = {});

struct AttractorBlock {
  Complex lambda;
  std::optional<RootOfUnity> root;
  std::vector<ComplexMatrix> basis;
  // Largest principal angle between the kernel and commutant spans, when
  // both routes were computed.
  std::optional<double> structure_angle;
};

/// Direct sum of Ker(Phi - lambda I) over |lambda| = 1, with a global
/// HS-orthonormal basis grouped per eigenvalue.
class AttractorSpace {
 public:
  /// Throws ShapeError unless every basis element is dim x dim.
  AttractorSpace(std::size_t dim, std::vector<AttractorBlock> blocks);

  std::size_t dim() const { return dim_; }
  const std::vector<AttractorBlock>& blocks() const { return blocks_; }
  std::size_t total_dim() const;

  /// Block whose eigenvalue lies within radius of lambda.
  const AttractorBlock* find(Complex lambda, double radius = 1e-6) const;

 private:
  std::size_t dim_;
  std::vector<AttractorBlock> blocks_;
};

/// Builds the space from the commutant route, cross-checks each block
/// against the kernel route and re-orthonormalizes globally. Throws
/// ConsistencyError when the two routes disagree.
AttractorSpace build_attractor_space(const UnitaryEnsemble& e, const AttractorOptions& opts = {});
AttractorSpace build_attractor_space(const UnitaryEnsemble& e, const Superoperator& s, const UnitSpectrum& spectrum,
                                     const AttractorOptions& opts = {});

/// Outcome of a report-only check. Passed iff no violations.
struct CheckReport {
  std::string name;
  double worst = 0.0;
  double threshold = 0.0;
  std::vector<std::string> violations;

  bool passed() const { return violations.empty(); }
};

/// |Tr X| <= tol for every basis element with lambda != 1.
CheckReport check_trace_property(const AttractorSpace& space, double tol = 1e-8);

struct RankVerdict {
  Complex lambda;
  std::size_t rank = 0;          // rank(S - lambda I)
  std::size_t rank_squared = 0;  // rank((S - lambda I)^2)

  bool passed() const { return rank == rank_squared; }
};

struct DiagonalizabilityReport {
  std::vector<RankVerdict> verdicts;

  bool passed() const;
};

/// No Jordan chains on the unit circle: equal ranks of (S - lambda I) and its square.
DiagonalizabilityReport check_diagonalizability(const Superoperator& s, const UnitSpectrum& spectrum,
                                                const AttractorOptions& opts = {});

/// Products X_a X_b lie in the lambda_a lambda_b block (or vanish) and
/// adjoints lie in the conj(lambda) block.
CheckReport check_closure(const AttractorSpace& space, double tol = 1e-8);

/// max_i || U_i X - lambda X U_i || over all basis elements.
CheckReport check_commutation(const UnitaryEnsemble& e, const AttractorSpace& space, double tol = 1e-8);

/// Global Gram matrix equals identity within tol.
CheckReport check_orthonormality(const AttractorSpace& space, double tol = 1e-10);

/// sum_i Tr(X_{1,i}^dagger) X_{1,i} = I within tol.
CheckReport check_unitality_resolution(const AttractorSpace& space, double tol = 1e-8);

/// Kernel and commutant spans agree for every unit eigenvalue.
CheckReport check_structure(const UnitaryEnsemble& e, const Superoperator& s, const UnitSpectrum& spectrum,
                            double tol = 1e-7, const AttractorOptions& opts = {});

/// Every eigenvalue of S has modulus <= 1 + tol.
CheckReport check_spectral_radius(const Superoperator& s, double tol = 1e-10);
CheckReport check_spectral_radius(std::span<const Complex> eigenvalues, double tol = 1e-10);

}  // namespace ruo
