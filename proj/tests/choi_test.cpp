#include <gtest/gtest.h>

#include <cmath>

#include "ruo/asymptotics.hpp"
#include "ruo/choi.hpp"
#include "ruo/errors.hpp"
#include "support.hpp"

namespace ruo {
namespace {

using testing::cnot_ensemble;
using testing::max_abs;

// d * |Omega><Omega| with |Omega> = sum_i |ii> / sqrt(d).
ComplexMatrix scaled_max_entangled(std::size_t d) {
  const ComplexVector omega = vec(identity(d)).data();
  return omega * omega.adjoint();
}

TEST(Reshuffle, IdentitySuperoperatorByIndexPermutation) {
  const std::size_t d = 2;
  const ComplexMatrix dm = reshuffle(identity(d * d));
  // Oracle: S = I means S[a*d+c, b*d+e] = delta_ab delta_ce, so D[a*d+b, c*d+e] = delta_ab delta_ce.
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t e = 0; e < d; ++e) {
          EXPECT_EQ(dm(a * d + b, c * d + e), Complex(a == b && c == e ? 1.0 : 0.0, 0.0));
        }
      }
    }
  }
  EXPECT_EQ(dm, scaled_max_entangled(d));
}

TEST(Reshuffle, ExactInvolution) {
  Rng rng(50);
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix m = random_ginibre(16, rng);
    EXPECT_EQ(reshuffle(reshuffle(m)), m);
  }
  const Superoperator s = superoperator(cnot_ensemble(0.3));
  EXPECT_EQ(reshuffle(reshuffle(s)).matrix(), s.matrix());
}

TEST(Reshuffle, CnotIsHermitian) {
  EXPECT_LT(hermiticity_residual(reshuffle(superoperator(cnot_ensemble())).matrix()), 1e-12);
}

TEST(Reshuffle, RuoGivesSumOfVecProjectors) {
  Rng rng(51);
  const UnitaryEnsemble e = testing::random_ensemble(3, 3, rng);
  ComplexMatrix oracle = ComplexMatrix::Zero(9, 9);
  for (const auto& m : e.members()) {
    const ComplexVector v = vec(m.unitary).data();
    oracle += m.probability * v * v.adjoint();
  }
  EXPECT_LT(max_abs(reshuffle(superoperator(e)).matrix() - oracle), 1e-14);
}

TEST(Reshuffle, RejectsBadSizes) {
  EXPECT_THROW(reshuffle(ComplexMatrix::Zero(5, 5)), ShapeError);
  EXPECT_THROW(reshuffle(ComplexMatrix::Zero(4, 9)), ShapeError);
  EXPECT_THROW(DynamicalMatrix(ComplexMatrix::Zero(3, 3)), ShapeError);
}

TEST(PartialTrace, KroneckerOracle) {
  Rng rng(52);
  const ComplexMatrix a = random_ginibre(3, rng), b = random_ginibre(3, rng);
  const ComplexMatrix c = kron(a, b);
  EXPECT_LT(max_abs(partial_trace(c, Subsystem::A) - a.trace() * b), 1e-13);
  EXPECT_LT(max_abs(partial_trace(c, Subsystem::B) - b.trace() * a), 1e-13);
}

TEST(PartialTrace, LinearAndTracePreserving) {
  Rng rng(53);
  const ComplexMatrix x = random_ginibre(9, rng), y = random_ginibre(9, rng);
  const Complex z(0.4, 2.0);
  for (Subsystem s : {Subsystem::A, Subsystem::B}) {
    EXPECT_LT(max_abs(partial_trace(x + z * y, s) - partial_trace(x, s) - z * partial_trace(y, s)), 1e-13);
    EXPECT_LT(std::abs(partial_trace(x, s).trace() - x.trace()), 1e-13);
  }
}

TEST(PartialTrace, RuoDynamicalMatrixIsBistochastic) {
  Rng rng(54);
  for (std::size_t d : {2u, 3u, 4u}) {
    const DynamicalMatrix dm = reshuffle(superoperator(testing::random_ensemble(d, 2, rng)));
    EXPECT_LT(max_abs(partial_trace(dm, Subsystem::A) - identity(d)), 1e-12);
    EXPECT_LT(max_abs(partial_trace(dm, Subsystem::B) - identity(d)), 1e-12);
  }
}

TEST(Audit, CnotChannelPasses) {
  const ChoiAudit a = audit(reshuffle(superoperator(cnot_ensemble())));
  EXPECT_TRUE(a.hermitian);
  EXPECT_TRUE(a.trace_preserving);
  EXPECT_TRUE(a.unital);
  EXPECT_TRUE(a.completely_positive);
  EXPECT_TRUE(a.passed());
  EXPECT_GE(a.min_eigenvalue, -1e-12);
}

TEST(Audit, CnotAsymptoticIsCompletelyPositive) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  for (std::int64_t n : {-2, -1, 0, 1, 2}) {
    const ChoiAudit a = audit(choi_of_asymptotic(space, n));
    EXPECT_TRUE(a.passed()) << "n=" << n << " min eigenvalue " << a.min_eigenvalue;
  }
}

TEST(Audit, TransposeMapIsNotCompletelyPositive) {
  const ChoiAudit a = audit(reshuffle(transpose_map(2)));
  EXPECT_NEAR(a.min_eigenvalue, -1.0, 1e-12);
  EXPECT_FALSE(a.completely_positive);
  EXPECT_FALSE(a.passed());
  // Transposition is still hermiticity-, trace- and identity-preserving.
  EXPECT_TRUE(a.hermitian && a.trace_preserving && a.unital);
}

TEST(Audit, DetectsNonTracePreservingMap) {
  const ChoiAudit a = audit(reshuffle(Superoperator(identity(4) * 0.5)));
  EXPECT_FALSE(a.trace_preserving);
  EXPECT_FALSE(a.unital);
  EXPECT_TRUE(a.completely_positive);
}

TEST(ChoiOfAsymptotic, MatchesReshuffleRoute) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  for (std::int64_t n : {-3, 0, 1, 4}) {
    const ComplexMatrix direct = choi_of_asymptotic(space, n).matrix();
    EXPECT_LT(max_abs(direct - reshuffle(asymptotic_propagator(space, n).matrix())), 1e-10);
  }
}

TEST(ChoiOfAsymptotic, ProjectorTraces) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  // Tr D = sum |Tr X|^2 = d by the unitality resolution; Tr P counts the attractors.
  EXPECT_NEAR(std::abs(choi_of_asymptotic(space, 0).matrix().trace() - 4.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(attractor_projector(space).matrix().trace() - 6.0), 0.0, 1e-12);
}

TEST(ChoiOfAsymptotic, IdentityChannel) {
  const AttractorSpace space = build_attractor_space(testing::single(identity(3)));
  for (std::int64_t n : {-1, 0, 3}) {
    EXPECT_LT(max_abs(choi_of_asymptotic(space, n).matrix() - scaled_max_entangled(3)), 1e-12);
  }
}

TEST(PositivityFunctional, NonNegativeOnRandomOperators) {
  Rng rng(55);
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  for (int k = 0; k < 50; ++k) {
    const Complex v = positivity_functional(space, random_ginibre(4, rng));
    EXPECT_GE(v.real(), -1e-9);
    EXPECT_LT(std::abs(v.imag()), 1e-10);
  }
  EXPECT_THROW(positivity_functional(space, identity(2)), ShapeError);
}

}  // namespace
}  // namespace ruo
