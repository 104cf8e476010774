#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ruo/asymptotics.hpp"
#include "ruo/errors.hpp"
#include "support.hpp"

namespace ruo {
namespace {

using testing::cnot_ensemble;
using testing::cnot_limit;
using testing::cnot_minus_basis;
using testing::max_abs;

const Complex kOne(1.0, 0.0);
const Complex kMinusOne(-1.0, 0.0);

ComplexMatrix orthogonal_complement_element(const AttractorSpace& space, Rng& rng) {
  std::vector<ComplexMatrix> all;
  for (const auto& b : space.blocks()) all.insert(all.end(), b.basis.begin(), b.basis.end());
  ComplexMatrix a = random_ginibre(space.dim(), rng);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& x : all) a -= hs_inner(x, a) * x;
  }
  return a;
}

TEST(UnitPower, MatchesStdPow) {
  const Complex z = std::polar(1.0, 0.7);
  for (std::int64_t n : {-5, -1, 0, 1, 2, 13}) {
    EXPECT_LT(std::abs(unit_power(z, n) - std::pow(z, static_cast<double>(n))), 1e-13);
  }
  EXPECT_EQ(unit_power(kMinusOne, 201), kMinusOne);
  EXPECT_EQ(unit_power(kMinusOne, std::numeric_limits<std::int64_t>::min()), kOne);
  EXPECT_EQ(unit_power(kMinusOne, std::numeric_limits<std::int64_t>::max()), kMinusOne);
}

TEST(Projector, CnotRankSix) {
  const Superoperator p = attractor_projector(build_attractor_space(cnot_ensemble()));
  EXPECT_EQ(numerical_rank(p.matrix(), 1e-9), 6u);
  EXPECT_LT(max_abs(p.matrix() * p.matrix() - p.matrix()), 1e-12);
}

TEST(Projector, IdentityChannel) {
  const Superoperator p = attractor_projector(build_attractor_space(testing::single(identity(2))));
  EXPECT_LT(max_abs(p.matrix() - identity(4)), 1e-12);
}

TEST(Projector, AnnihilatesOrthogonalComplement) {
  Rng rng(40);
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  const Superoperator p = attractor_projector(space);
  for (int k = 0; k < 5; ++k) {
    const ComplexMatrix a = orthogonal_complement_element(space, rng);
    EXPECT_LT(std::abs(a.trace()), 1e-10);
    EXPECT_LT(hs_norm(p.apply(a)), 1e-10);
  }
}

TEST(Propagator, EvenAndOddDifferInMinusTermSign) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  const ComplexMatrix x = cnot_minus_basis();
  const ComplexVector v = vec(x).data();
  const ComplexMatrix diff = asymptotic_propagator(space, 4).matrix() - asymptotic_propagator(space, 7).matrix();
  EXPECT_LT(max_abs(diff - 2.0 * v * v.adjoint()), 1e-12);
}

TEST(Propagator, ZeroPowerIsProjectorAndInverse) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble(0.2));
  const ComplexMatrix p = attractor_projector(space).matrix();
  EXPECT_LT(max_abs(asymptotic_propagator(space, 0).matrix() - p), 1e-15);
  const ComplexMatrix prod = asymptotic_propagator(space, -1).matrix() * asymptotic_propagator(space, 1).matrix();
  EXPECT_LT(max_abs(prod - p), 1e-10);
}

TEST(Propagator, CommutesWithChannelAndAgreesWithIteration) {
  Rng rng(41);
  const UnitaryEnsemble e = testing::single(testing::pauli_x());
  const AsymptoticPropagator prop(build_attractor_space(e));
  const ComplexMatrix s = superoperator(e).matrix();
  EXPECT_LT(max_abs(s * prop.step().matrix() - prop.step().matrix() * s), 1e-12);
  // Single unitary: no transient, so the limit equals the orbit.
  const ComplexMatrix a = random_ginibre(2, rng);
  for (std::int64_t n : {0, 1, 2, 3}) EXPECT_LT(max_abs(prop.apply(a, n) - iterate_operator(e, a, n)), 1e-12);
}

TEST(AsymptoticState, MatchesClosedForm) {
  Rng rng(42);
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho = random_density(4, rng);
    for (std::int64_t n : {0, 1, 2, 3, 200, 201, -1}) {
      const bool odd = (n % 2) != 0;
      EXPECT_LT(max_abs(asymptotic_state(space, rho, n) - cnot_limit(rho.matrix(), odd)), 1e-12) << "n=" << n;
    }
  }
}

TEST(AsymptoticState, InvariantStates) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  const DensityMatrix mixed(identity(4) / 4.0);
  const DensityMatrix ground(testing::projector(4, 0));
  for (std::int64_t n : {0, 1, 5, -3}) {
    EXPECT_LT(max_abs(asymptotic_state(space, mixed, n) - mixed.matrix()), 1e-12);
    EXPECT_LT(max_abs(asymptotic_state(space, ground, n) - ground.matrix()), 1e-12);
  }
}

TEST(AsymptoticState, ShapeMismatch) {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  EXPECT_THROW(asymptotic_operator(space, identity(2), 1), ShapeError);
}

TEST(Convergence, CnotReachesThreshold) {
  Rng rng(43);
  const UnitaryEnsemble e = cnot_ensemble();
  const ConvergenceTrace t = convergence_trace(e, random_density(4, rng), 200);
  ASSERT_EQ(t.distances.size(), 201u);
  EXPECT_EQ(t.distances.front().n, 0);
  EXPECT_LE(t.distances.back().distance, 1e-8);
  EXPECT_TRUE(t.converged);
  ASSERT_TRUE(t.converged_at.has_value());
  EXPECT_NEAR(t.subdominant_modulus, 0.5, 1e-12);
  ASSERT_TRUE(t.fitted_rate.has_value());
  EXPECT_NEAR(*t.fitted_rate, 0.5, 1e-3);
}

TEST(Convergence, StepsNeededFollowSubdominantModulus) {
  // mu^n with a transient prefactor below 1e2.
  Rng rng(44);
  for (double p : {0.1, 0.5, 0.9}) {
    const UnitaryEnsemble e = cnot_ensemble(p);
    const ConvergenceTrace t = convergence_trace(e, random_density(4, rng), 300);
    ASSERT_TRUE(t.converged_at.has_value());
    const double bound = std::log(1e-8 * 1e-2) / std::log(t.subdominant_modulus);
    EXPECT_LE(static_cast<double>(*t.converged_at), bound) << "p1=" << p;
  }
}

TEST(Convergence, IdentityChannelHasNoTransient) {
  Rng rng(45);
  const ConvergenceTrace t = convergence_trace(testing::single(identity(3)), random_density(3, rng), 20);
  for (const auto& p : t.distances) EXPECT_EQ(p.distance, 0.0);
  EXPECT_EQ(t.subdominant_modulus, 0.0);
  EXPECT_FALSE(t.fitted_rate.has_value());
  EXPECT_EQ(t.converged_at, 0);
}

TEST(Convergence, SkewedProbabilitiesConvergeSlower) {
  Rng rng(46);
  const DensityMatrix rho = random_density(4, rng);
  const ConvergenceTrace fast = convergence_trace(cnot_ensemble(0.5), rho, 150);
  const ConvergenceTrace slow = convergence_trace(cnot_ensemble(0.9), rho, 150);
  EXPECT_GT(slow.subdominant_modulus, fast.subdominant_modulus);
  ASSERT_TRUE(fast.fitted_rate && slow.fitted_rate);
  EXPECT_GT(*slow.fitted_rate, *fast.fitted_rate);
  // p1 and 1 - p1 share the same spectrum.
  EXPECT_NEAR(convergence_trace(cnot_ensemble(0.1), rho, 2).subdominant_modulus, slow.subdominant_modulus, 1e-10);
}

TEST(Convergence, Errors) {
  Rng rng(47);
  EXPECT_THROW(convergence_trace(cnot_ensemble(), random_density(4, rng), 0), ParameterError);
  EXPECT_THROW(convergence_trace(cnot_ensemble(), random_density(2, rng), 5), ShapeError);
}

TEST(RateFit, RecoversGeometricDecay) {
  std::vector<ConvergencePoint> pts;
  for (int n = 0; n <= 60; ++n) pts.push_back({n, 3.0 * std::pow(0.7, n)});
  const auto fit = fit_exponential_rate(pts);
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->rate, 0.7, 1e-12);
  EXPECT_NEAR(fit->r_squared, 1.0, 1e-12);
}

TEST(RateFit, RejectsFlatOrNoisyOrShortData) {
  std::vector<ConvergencePoint> flat, noisy, tiny;
  for (int n = 0; n <= 30; ++n) {
    flat.push_back({n, 0.25});
    noisy.push_back({n, (n % 2 == 0) ? 1.0 : 1e-3});
    tiny.push_back({n, 1e-14});
  }
  EXPECT_FALSE(fit_exponential_rate(flat).has_value());
  EXPECT_FALSE(fit_exponential_rate(noisy).has_value());
  EXPECT_FALSE(fit_exponential_rate(tiny).has_value());
  EXPECT_FALSE(fit_exponential_rate({{1, 0.5}, {2, 0.25}}).has_value());
}

TEST(Classify, Regimes) {
  const AttractorSpace cnot = build_attractor_space(cnot_ensemble());
  const Classification c = classify_asymptotics(cnot);
  EXPECT_EQ(c.regime, Regime::Periodic);
  EXPECT_EQ(c.period, 2);

  Rng rng(48);
  const UnitaryEnsemble with_identity = validate_ensemble({{0.4, identity(3)}, {0.6, random_unitary(3, rng)}});
  EXPECT_EQ(classify_asymptotics(build_attractor_space(with_identity)).regime, Regime::Stationary);
  EXPECT_FALSE(classify_asymptotics(build_attractor_space(with_identity)).period.has_value());

  const AttractorSpace irrational = build_attractor_space(to_ensemble(builtin("diag_irrational_phase")));
  EXPECT_EQ(classify_asymptotics(irrational).regime, Regime::Aperiodic);
}

TEST(Classify, LeastCommonPeriod) {
  // Eigenvalues 1, w3, w4 phases combine to period 12.
  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u(0, 0) = 1.0;
  u(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  u(2, 2) = std::polar(1.0, 2.0 * std::numbers::pi / 4.0);
  const AttractorSpace space = build_attractor_space(testing::single(u));
  const Classification c = classify_asymptotics(space);
  EXPECT_EQ(c.regime, Regime::Periodic);
  EXPECT_EQ(c.period, 12);
  EXPECT_EQ(classify_asymptotics(space, 11).regime, Regime::Aperiodic);
}

TEST(Classify, ToString) {
  EXPECT_EQ(to_string(Regime::Stationary), "STATIONARY");
  EXPECT_EQ(to_string(Regime::Periodic), "PERIODIC");
  EXPECT_EQ(to_string(Regime::Aperiodic), "APERIODIC");
}

}  // namespace
}  // namespace ruo
