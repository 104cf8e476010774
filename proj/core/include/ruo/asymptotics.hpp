#pragma once

// Asymptotic propagator Phi_ass, closed-form asymptotic states, convergence
// measurement and classification of the asymptotic regime.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ruo/attractors.hpp"
#include "ruo/channel.hpp"

namespace ruo {

/// P(A) = sum Tr(X^dagger A) X over the attractor basis.
Superoperator attractor_projector(const AttractorSpace& space);

/// Phi_ass^n(A) = sum lambda^n Tr(X^dagger A) X, for any integer n.
Superoperator asymptotic_propagator(const AttractorSpace& space, std::int64_t n);

/// lambda^n for |lambda| = 1 by repeated squaring; negative n uses conj(lambda).
Complex unit_power(Complex lambda, std::int64_t n);

/// Caches the one-step matrix of Phi_ass; powers are evaluated in closed form.
class AsymptoticPropagator {
 public:
  explicit AsymptoticPropagator(AttractorSpace space);

  const AttractorSpace& space() const { return space_; }
  const Superoperator& step() const { return step_; }
  Superoperator power(std::int64_t n) const { return asymptotic_propagator(space_, n); }
  ComplexMatrix apply(const ComplexMatrix& a, std::int64_t n) const;

 private:
  AttractorSpace space_;
  Superoperator step_;
};

/// Phi_ass^n applied to an arbitrary operator.
ComplexMatrix asymptotic_operator(const AttractorSpace& space, const ComplexMatrix& a, std::int64_t n);

/// rho_inf(n) = sum lambda^n Tr(rho0 X^dagger) X.
ComplexMatrix asymptotic_state(const AttractorSpace& space, const DensityMatrix& rho0, std::int64_t n);

struct ConvergenceOptions {
  double threshold = 1e-8;
  double unit_circle_tol = 1e-9;
  double min_r_squared = 0.99;
  // Distances at or below this are roundoff and excluded from the rate fit.
  double noise_floor = 1e-12;
};

struct ConvergencePoint {
  std::int64_t n;
  double distance;  // || rho(n) - rho_inf(n) ||_HS
};

struct ConvergenceTrace {
  std::vector<ConvergencePoint> distances;  // n = 0 .. n_max
  double subdominant_modulus = 0.0;          // 0 when every eigenvalue is unimodular
  std::optional<double> fitted_rate;         // per-step factor exp(slope)
  std::optional<double> r_squared;
  double threshold = 1e-8;
  bool converged = false;                    // final distance <= threshold
  std::optional<std::int64_t> converged_at;  // first n after which all distances <= threshold
};

/// max |lambda| over eigenvalues with |lambda| < 1 - unit_circle_tol.
double subdominant_modulus(const Superoperator& s, double unit_circle_tol = 1e-9);
double subdominant_modulus(std::span<const Complex> eigenvalues, double unit_circle_tol = 1e-9);

ConvergenceTrace convergence_trace(const UnitaryEnsemble& e, const AttractorSpace& space, const DensityMatrix& rho0,
                                   std::int64_t n_max, const ConvergenceOptions& opts = {});

/// Builds the attractor space with default options first.
/// Same, with the subdominant modulus supplied by the caller.
ConvergenceTrace convergence_trace(const UnitaryEnsemble& e, const AttractorSpace& space, const DensityMatrix& rho0,
                                   std::int64_t n_max, double subdominant, const ConvergenceOptions& opts = {});
ConvergenceTrace convergence_trace(const UnitaryEnsemble& e, const DensityMatrix& rho0, std::int64_t n_max,
                                   const ConvergenceOptions& opts = {});

/// Least-squares fit of log(distance) against n over the final two-thirds of
/// the points above the noise floor. Empty when fewer than three points
/// remain or the fit's R^2 is below min_r_squared.
struct RateFit {
  double rate;
  double r_squared;
};
std::optional<RateFit> fit_exponential_rate(const std::vector<ConvergencePoint>& points,
                                            const ConvergenceOptions& opts = {});

enum class Regime { Stationary, Periodic, Aperiodic };

std::string_view to_string(Regime r);

struct Classification {
  Regime regime = Regime::Stationary;
  std::optional<int> period;  // set for Periodic
};

/// Stationary when only lambda = 1 occurs; Periodic with the minimal T <=
/// max_order such that every lambda is within tol of a T-th root of unity;
/// Aperiodic otherwise.
Classification classify_asymptotics(const AttractorSpace& space, int max_order = 24, double tol = 1e-8);

}  // namespace ruo
