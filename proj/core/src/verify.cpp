#include "ruo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ruo/random.hpp"

namespace ruo {

namespace {

std::string fmt_e(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

CheckResult from_report(const CheckReport& r) {
  CheckResult c{r.name, r.passed() ? CheckStatus::Pass : CheckStatus::Fail, r.worst, r.threshold, {}};
  if (!r.violations.empty()) {
    c.detail = r.violations.front();
    if (r.violations.size() > 1) c.detail += " (+" + std::to_string(r.violations.size() - 1) + " more)";
  }
  return c;
}

CheckResult bound_check(std::string name, double measure, double threshold, std::string detail = {}) {
  return {std::move(name), measure <= threshold ? CheckStatus::Pass : CheckStatus::Fail, measure, threshold,
          std::move(detail)};
}

void add_audit(std::vector<CheckResult>& out, const std::string& name, const ChoiAudit& a, const ChoiTolerances& tol) {
  out.push_back(bound_check(name + ".hermiticity", a.hermiticity_residual, tol.hermiticity));
  out.push_back(bound_check(name + ".trace_a", a.trace_a_residual, tol.partial_trace));
  out.push_back(bound_check(name + ".trace_b", a.trace_b_residual, tol.partial_trace));
  // Reported as -min_eigenvalue so that "measure <= threshold" reads uniformly.
  out.push_back(bound_check(name + ".positivity", -a.min_eigenvalue, tol.positivity,
                            "min eigenvalue " + fmt_e(a.min_eigenvalue)));
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skipped:
      return "SKIPPED";
  }
  return "UNKNOWN";
}

bool Verification::passed(bool allow_skipped) const {
  return std::all_of(checks.begin(), checks.end(), [&](const CheckResult& c) {
    return c.status == CheckStatus::Pass || (allow_skipped && c.status == CheckStatus::Skipped);
  });
}

std::int64_t convergence_horizon(double subdominant, double threshold, std::int64_t cap) {
  if (subdominant <= 0.0) return 10;
  // Two extra decades cover the prefactor of the transient.
  const double steps = std::log(threshold * 1e-2) / std::log(subdominant);
  return std::min(cap, static_cast<std::int64_t>(std::ceil(steps)) + 10);
}

Verification verify_ensemble(const UnitaryEnsemble& e, const VerifyOptions& opts) {
  const Superoperator s = superoperator(e);
  const std::vector<Complex> eig = eigenvalues(s.matrix());
  UnitSpectrum spectrum = unit_spectrum(s, eig, opts.attractor);
  AttractorSpace space = build_attractor_space(e, s, spectrum, opts.attractor);
  const Classification cls = classify_asymptotics(space, opts.attractor.max_root_order, opts.attractor.root_tol);

  std::vector<CheckResult> checks;
  Rng rng(opts.seed);
  const std::size_t d = e.dim();

  // Structure theorem and attractor-space invariants.
  {
    // The build already compared both routes per block.
    CheckReport r{"structure", 0.0, 1e-7, {}};
    for (const auto& b : space.blocks()) {
      const double angle = b.structure_angle.value_or(0.0);
      r.worst = std::max(r.worst, angle);
      if (angle > r.threshold) r.violations.push_back("block dimension " + std::to_string(b.basis.size()) +
                                                      ", angle " + fmt_e(angle));
    }
    checks.push_back(from_report(r));
  }
  checks.push_back(from_report(check_commutation(e, space)));
  checks.push_back(from_report(check_orthonormality(space)));
  checks.push_back(from_report(check_trace_property(space)));
  checks.push_back(from_report(check_unitality_resolution(space)));
  {
    const auto diag = check_diagonalizability(s, spectrum, opts.attractor);
    CheckResult c{"diagonalizability", diag.passed() ? CheckStatus::Pass : CheckStatus::Fail, 0.0, 0.0, {}};
    for (const auto& v : diag.verdicts) {
      if (!c.detail.empty()) c.detail += "; ";
      c.detail += "rank " + std::to_string(v.rank) + "/" + std::to_string(v.rank_squared);
      c.measure = std::max(c.measure, std::abs(static_cast<double>(v.rank) - static_cast<double>(v.rank_squared)));
    }
    checks.push_back(std::move(c));
  }
  checks.push_back(from_report(check_closure(space)));
  {
    std::size_t mult_sum = 0;
    for (const auto& u : spectrum.values) mult_sum += u.multiplicity;
    checks.push_back(bound_check("attractor_dimension",
                                 std::abs(static_cast<double>(mult_sum) - static_cast<double>(space.total_dim())), 0.0,
                                 "spectrum " + std::to_string(mult_sum) + ", space " +
                                     std::to_string(space.total_dim())));
  }

  // Contraction, trace preservation, positivity preservation.
  checks.push_back(from_report(check_spectral_radius(eig)));
  {
    double contraction = -1e300, trace_defect = 0.0, herm_defect = 0.0, min_eig = 1e300;
    for (int k = 0; k < opts.random_samples; ++k) {
      const ComplexMatrix a = random_ginibre(d, rng);
      const ComplexMatrix out = apply_channel(e, a);
      contraction = std::max(contraction, out.norm() - a.norm());
      trace_defect = std::max(trace_defect, std::abs(out.trace() - a.trace()));
      const DensityMatrix rho = random_density(d, rng);
      const ComplexMatrix img = apply_channel(e, rho.matrix());
      herm_defect = std::max(herm_defect, hermiticity_residual(img));
      min_eig = std::min(min_eig, min_hermitian_eigenvalue(img));
    }
    checks.push_back(bound_check("contraction", contraction, 1e-12, "max ||Phi(A)|| - ||A||"));
    checks.push_back(bound_check("trace_preservation", trace_defect, 1e-12));
    checks.push_back(bound_check("hermiticity_preservation", herm_defect, 1e-10));
    checks.push_back(bound_check("positivity_preservation", -min_eig, 1e-10, "min eigenvalue " + fmt_e(min_eig)));
  }

  // Projector and asymptotic propagator algebra.
  const Superoperator proj = attractor_projector(space);
  const AsymptoticPropagator prop(space);
  {
    const ComplexMatrix& p = proj.matrix();
    checks.push_back(bound_check("projector_idempotent", (p * p - p).norm(), 1e-10));
    checks.push_back(bound_check("projector_hermitian", hermiticity_residual(p), 1e-10));
    checks.push_back(bound_check("projector_commutes_with_channel", (s.matrix() * p - p * s.matrix()).norm(), 1e-10));
    const ComplexMatrix& a = prop.step().matrix();
    checks.push_back(bound_check("propagator_commutes_with_projector", (a * p - p * a).norm(), 1e-10));
    checks.push_back(bound_check("propagator_unital", prop.step().unitality_residual(), 1e-10));
    checks.push_back(bound_check("propagator_square", (a * a - prop.power(2).matrix()).norm(), 1e-10));
    std::vector<ComplexMatrix> powers;
    for (int x = -4; x <= 4; ++x) powers.push_back(prop.power(x).matrix());
    auto pw = [&](int x) -> const ComplexMatrix& { return powers[static_cast<std::size_t>(x + 4)]; };
    double semigroup = 0.0;
    for (int x = -2; x <= 2; ++x) {
      for (int y = -2; y <= 2; ++y) {
        semigroup = std::max(semigroup, (pw(x) * pw(y) - pw(x + y)).norm());
      }
    }
    checks.push_back(bound_check("propagator_semigroup", semigroup, 1e-10));
    if (cls.regime == Regime::Periodic) {
      const int t = *cls.period;
      double worst = 0.0;
      for (int n = 0; n <= 3 * t; ++n) {
        worst = std::max(worst, (prop.power(n + t).matrix() - prop.power(n).matrix()).norm());
      }
      checks.push_back(bound_check("propagator_periodicity", worst, 1e-9, "period " + std::to_string(t)));
    } else {
      checks.push_back({"propagator_periodicity", CheckStatus::Pass, 0.0, 1e-9,
                        "not applicable: regime " + std::string(to_string(cls.regime))});
    }
  }

  // Dynamical matrices of Phi^n and Phi_ass^n, and the two Choi routes.
  for (int n : {1, 2, 5}) {
    add_audit(checks, "choi_channel_power_" + std::to_string(n), audit(reshuffle(s.power(n)), opts.choi), opts.choi);
  }
  {
    double dual = 0.0;
    for (int n = -2; n <= 2; ++n) {
      const DynamicalMatrix direct = choi_of_asymptotic(space, n);
      add_audit(checks, "choi_asymptotic_" + std::to_string(n), audit(direct, opts.choi), opts.choi);
      dual = std::max(dual, (direct.matrix() - reshuffle(prop.power(n).matrix())).norm());
    }
    checks.push_back(bound_check("choi_dual_route", dual, 1e-10));
  }
  {
    double worst_neg = -1e300, worst_imag = 0.0;
    for (int k = 0; k < opts.positivity_samples; ++k) {
      ComplexMatrix a = random_ginibre(d, rng);
      a /= a.norm();
      const Complex v = positivity_functional(space, a);
      worst_neg = std::max(worst_neg, -v.real());
      worst_imag = std::max(worst_imag, std::abs(v.imag()));
    }
    checks.push_back(bound_check("positivity_inequality", worst_neg, 1e-9, "imaginary residue " + fmt_e(worst_imag)));
  }

  // Asymptotic states and convergence.
  {
    double herm = 0.0, trace = 0.0;
    for (int k = 0; k < opts.random_samples; ++k) {
      const DensityMatrix rho = random_density(d, rng);
      for (std::int64_t n : {0, 1, 2, 7}) {
        const ComplexMatrix inf = asymptotic_state(space, rho, n);
        herm = std::max(herm, hermiticity_residual(inf));
        trace = std::max(trace, std::abs(inf.trace() - 1.0));
      }
    }
    checks.push_back(bound_check("asymptotic_state_hermitian", herm, 1e-10));
    checks.push_back(bound_check("asymptotic_state_trace", trace, 1e-9));
  }

  ConvergenceTrace trace;
  const DensityMatrix rho0 = random_density(d, rng);
  const double mu = subdominant_modulus(eig, opts.attractor.unit_circle_tol);
  if (mu > 1.0 - opts.slow_mixing_gap) {
    checks.push_back({"convergence", CheckStatus::Skipped, mu, opts.convergence.threshold,
                      "subdominant modulus " + fmt_e(mu) + " too close to 1 for a bounded iteration"});
    trace.subdominant_modulus = mu;
    trace.threshold = opts.convergence.threshold;
  } else {
    const std::int64_t steps = convergence_horizon(mu, opts.convergence.threshold, opts.max_convergence_steps);
    trace = convergence_trace(e, space, rho0, steps, mu, opts.convergence);
    checks.push_back(bound_check("convergence", trace.distances.back().distance, opts.convergence.threshold,
                                 "distance after " + std::to_string(steps) + " steps"));
  }

  return Verification{std::move(spectrum), std::move(space), cls, std::move(trace), std::move(checks)};
}

}  // namespace ruo
