#include "ruo/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ruo/errors.hpp"

namespace ruo {

namespace {

ComplexMatrix weighted_outer_sum(const AttractorSpace& space, std::int64_t n) {
  const auto d2 = static_cast<Eigen::Index>(space.dim() * space.dim());
  ComplexMatrix m = ComplexMatrix::Zero(d2, d2);
  for (const auto& b : space.blocks()) {
    const Complex w = unit_power(b.lambda, n);
    for (const auto& x : b.basis) {
      const ComplexVector v = vec(x).data();
      m.noalias() += w * (v * v.adjoint());
    }
  }
  return m;
}

}  // namespace

Complex unit_power(Complex lambda, std::int64_t n) {
  Complex base = n < 0 ? std::conj(lambda) : lambda;
  std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1U : static_cast<std::uint64_t>(n);
  Complex result(1.0, 0.0);
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base *= base;
  }
  return result;
}

Superoperator attractor_projector(const AttractorSpace& space) { return Superoperator(weighted_outer_sum(space, 0)); }

Superoperator asymptotic_propagator(const AttractorSpace& space, std::int64_t n) {
  return Superoperator(weighted_outer_sum(space, n));
}

AsymptoticPropagator::AsymptoticPropagator(AttractorSpace space)
    : space_(std::move(space)), step_(asymptotic_propagator(space_, 1)) {}

ComplexMatrix AsymptoticPropagator::apply(const ComplexMatrix& a, std::int64_t n) const {
  return asymptotic_operator(space_, a, n);
}

ComplexMatrix asymptotic_operator(const AttractorSpace& space, const ComplexMatrix& a, std::int64_t n) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != space.dim()) {
    throw ShapeError("asymptotic_operator: operator is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     ", attractor space dimension is " + std::to_string(space.dim()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& b : space.blocks()) {
    const Complex w = unit_power(b.lambda, n);
    for (const auto& x : b.basis) out += (w * hs_inner(x, a)) * x;
  }
  return out;
}

ComplexMatrix asymptotic_state(const AttractorSpace& space, const DensityMatrix& rho0, std::int64_t n) {
  return asymptotic_operator(space, rho0.matrix(), n);
}

double subdominant_modulus(const Superoperator& s, double unit_circle_tol) {
  const std::vector<Complex> all = eigenvalues(s.matrix());
  return subdominant_modulus(all, unit_circle_tol);
}

double subdominant_modulus(std::span<const Complex> eigenvalues, double unit_circle_tol) {
  double mu = 0.0;
  for (Complex z : eigenvalues) {
    const double r = std::abs(z);
    if (r < 1.0 - unit_circle_tol) mu = std::max(mu, r);
  }
  return mu;
}

std::optional<RateFit> fit_exponential_rate(const std::vector<ConvergencePoint>& points,
                                            const ConvergenceOptions& opts) {
  std::vector<ConvergencePoint> usable;
  for (const auto& p : points) {
    if (p.n >= 1 && p.distance > opts.noise_floor) usable.push_back(p);
  }
  const std::size_t start = usable.size() / 3;
  const std::size_t count = usable.size() - start;
  if (count < 3) return std::nullopt;

  double sx = 0.0, sy = 0.0;
  for (std::size_t k = start; k < usable.size(); ++k) {
    sx += static_cast<double>(usable[k].n);
    sy += std::log(usable[k].distance);
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = start; k < usable.size(); ++k) {
    const double dx = static_cast<double>(usable[k].n) - mx;
    const double dy = std::log(usable[k].distance) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  // A perfectly flat tail has syy = 0; that is not exponential decay.
  if (syy == 0.0) return std::nullopt;
  const double r2 = (sxy * sxy) / (sxx * syy);
  if (r2 < opts.min_r_squared) return std::nullopt;
  return RateFit{std::exp(slope), r2};
}

ConvergenceTrace convergence_trace(const UnitaryEnsemble& e, const AttractorSpace& space, const DensityMatrix& rho0,
                                   std::int64_t n_max, const ConvergenceOptions& opts) {
  if (n_max < 1) throw ParameterError("convergence_trace: n_max must be >= 1");
  if (rho0.dim() != e.dim()) throw ShapeError("convergence_trace: state dimension differs from ensemble");
  return convergence_trace(e, space, rho0, n_max, subdominant_modulus(superoperator(e), opts.unit_circle_tol), opts);
}

ConvergenceTrace convergence_trace(const UnitaryEnsemble& e, const AttractorSpace& space, const DensityMatrix& rho0,
                                   std::int64_t n_max, double subdominant, const ConvergenceOptions& opts) {
  if (n_max < 1) throw ParameterError("convergence_trace: n_max must be >= 1");
  if (rho0.dim() != e.dim()) throw ShapeError("convergence_trace: state dimension differs from ensemble");

  ConvergenceTrace trace;
  trace.threshold = opts.threshold;
  trace.subdominant_modulus = subdominant;

  // Iteration is sequential; the closed form is evaluated per step.
  ComplexMatrix rho = rho0.matrix();
  trace.distances.reserve(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t n = 0; n <= n_max; ++n) {
    if (n > 0) rho = apply_channel(e, rho);
    const double dist = (rho - asymptotic_operator(space, rho0.matrix(), n)).norm();
    trace.distances.push_back({n, dist});
  }

  for (auto it = trace.distances.rbegin(); it != trace.distances.rend(); ++it) {
    if (it->distance > opts.threshold) break;
    trace.converged_at = it->n;
  }
  trace.converged = trace.distances.back().distance <= opts.threshold;

  if (auto fit = fit_exponential_rate(trace.distances, opts)) {
    trace.fitted_rate = fit->rate;
    trace.r_squared = fit->r_squared;
  }
  return trace;
}

ConvergenceTrace convergence_trace(const UnitaryEnsemble& e, const DensityMatrix& rho0, std::int64_t n_max,
                                   const ConvergenceOptions& opts) {
  return convergence_trace(e, build_attractor_space(e), rho0, n_max, opts);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Stationary:
      return "STATIONARY";
    case Regime::Periodic:
      return "PERIODIC";
    case Regime::Aperiodic:
      return "APERIODIC";
  }
  return "UNKNOWN";
}

Classification classify_asymptotics(const AttractorSpace& space, int max_order, double tol) {
  auto near_root_of_order = [tol](Complex lambda, int order) {
    const double step = 2.0 * std::numbers::pi / order;
    const double k = std::round(phase_0_2pi(lambda) / step);
    return std::abs(lambda - std::polar(1.0, k * step)) <= tol;
  };
  for (int t = 1; t <= max_order; ++t) {
    const bool all = std::all_of(space.blocks().begin(), space.blocks().end(),
                                 [&](const AttractorBlock& b) { return near_root_of_order(b.lambda, t); });
    if (all) {
      if (t == 1) return {Regime::Stationary, std::nullopt};
      return {Regime::Periodic, t};
    }
  }
  return {Regime::Aperiodic, std::nullopt};
}

}  // namespace ruo
