#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ruo/asymptotics.hpp"
#include "ruo/attractors.hpp"
#include "ruo/choi.hpp"
#include "ruo/cli.hpp"
#include "ruo/io.hpp"
#include "ruo/verify.hpp"
#include "support.hpp"

namespace {

using namespace ruo;
using testing::cnot_ensemble;
using testing::cnot_limit;
using testing::cnot_minus_basis;
using testing::cnot_plus_basis;
using testing::data_path;
using testing::max_abs;

struct Outcome {
  bool passed;
  std::string summary;
};

struct Named {
  std::string name;
  UnitaryEnsemble ensemble;
};

std::vector<Named> builtin_corpus() {
  std::vector<Named> out;
  for (const auto& name : builtin_names()) out.push_back({name, to_ensemble(builtin(name))});
  out.push_back({"identity(d=3)", to_ensemble(builtin("identity", 3.0))});
  out.push_back({"cnot_pair(p1=0.1)", to_ensemble(builtin("cnot_pair", 0.1))});
  return out;
}

std::vector<Named> full_corpus() {
  std::vector<Named> out = builtin_corpus();
  Rng rng(20240917);
  for (int k = 0; k < 20; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    out.push_back({"random#" + std::to_string(k) + "(d=" + std::to_string(d) + ")", testing::random_ensemble(d, 2, rng)});
  }
  return out;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_command(args, o, e);
  if (out) *out = o.str();
  return code;
}

Outcome ac1() {
  std::string report;
  if (run_cli({"attractors", data_path("cnot_pair.json"), "--full"}, &report) != kExitOk) {
    return {false, "attractors command failed"};
  }
  const AttractorSpace space = attractor_space_from_report(report);
  const AttractorBlock* plus = space.find(Complex(1.0, 0.0));
  const AttractorBlock* minus = space.find(Complex(-1.0, 0.0));
  if (!plus || !minus || space.blocks().size() != 2) return {false, "unexpected unit spectrum"};
  const std::vector<ComplexMatrix> reference_minus{cnot_minus_basis()};
  const double angle = std::max(max_principal_angle(plus->basis, cnot_plus_basis()),
                                max_principal_angle(minus->basis, reference_minus));
  const bool ok = plus->basis.size() == 5 && minus->basis.size() == 1 && angle <= 1e-7;
  return {ok, "dim Ker(S-I)=" + std::to_string(plus->basis.size()) + ", dim Ker(S+I)=" +
                  std::to_string(minus->basis.size()) + ", max angle to reference basis " + fmt("%.2e", angle)};
}

Outcome ac2() {
  const AttractorSpace space = build_attractor_space(cnot_ensemble());
  Rng rng(2);
  double worst = 0.0;
  for (int k = 0; k < 25; ++k) {
    const DensityMatrix rho = random_density(4, rng);
    for (std::int64_t n : {0, 1, 5, 50, 1000}) {
      worst = std::max(worst, max_abs(asymptotic_state(space, rho, 2 * n) - cnot_limit(rho.matrix(), false)));
      worst = std::max(worst, max_abs(asymptotic_state(space, rho, 2 * n + 1) - cnot_limit(rho.matrix(), true)));
    }
  }
  return {worst <= 1e-9, "25 states, max entrywise deviation " + fmt("%.2e", worst)};
}

Outcome ac3() {
  Rng rng(3);
  std::vector<DensityMatrix> states;
  for (int k = 0; k < 10; ++k) states.push_back(random_density(4, rng));
  double worst = 0.0, angle = 0.0;
  bool dims_ok = true;
  const AttractorSpace ref = build_attractor_space(cnot_ensemble(0.5));
  for (double p : {0.1, 0.5, 0.9}) {
    const UnitaryEnsemble e = cnot_ensemble(p);
    const AttractorSpace space = build_attractor_space(e);
    for (const auto& rho : states) {
      const ConvergenceTrace t = convergence_trace(e, space, rho, 500);
      worst = std::max(worst, t.distances.back().distance);
    }
    dims_ok = dims_ok && space.blocks().size() == ref.blocks().size();
    for (std::size_t b = 0; dims_ok && b < ref.blocks().size(); ++b) {
      dims_ok = std::abs(space.blocks()[b].lambda - ref.blocks()[b].lambda) < 1e-9;
      angle = std::max(angle, max_principal_angle(space.blocks()[b].basis, ref.blocks()[b].basis));
    }
  }
  return {dims_ok && worst <= 1e-8 && angle <= 1e-7,
          "max ||S^500(rho) - rho_inf(500)|| " + fmt("%.2e", worst) + ", max angle across p1 " + fmt("%.2e", angle)};
}

Outcome ac4() {
  double worst = 0.0;
  std::size_t checked = 0;
  std::string failure;
  for (const auto& [name, e] : full_corpus()) {
    const Superoperator s = superoperator(e);
    for (const auto& u : unit_spectrum(s).values) {
      const auto a = commutant_basis(e, u.lambda), b = kernel_basis(s, u.lambda);
      const double angle = max_principal_angle(a, b);
      worst = std::max(worst, angle);
      ++checked;
      if (a.size() != b.size() || a.empty() || angle > 1e-7) failure = name;
    }
  }
  return {failure.empty(), std::to_string(checked) + " eigenvalues, max angle " + fmt("%.2e", worst) +
                               (failure.empty() ? "" : ", mismatch in " + failure)};
}

Outcome ac5() {
  std::string failure;
  for (const auto& [name, e] : full_corpus()) {
    const Superoperator s = superoperator(e);
    if (!check_diagonalizability(s, unit_spectrum(s)).passed()) failure = name;
  }
  const Superoperator s = superoperator(cnot_ensemble());
  const auto r = check_diagonalizability(s, unit_spectrum(s));
  const bool cnot_ok = r.verdicts.size() == 2 && r.verdicts[0].rank == 11 && r.verdicts[0].rank_squared == 11 &&
                       r.verdicts[1].rank == 15 && r.verdicts[1].rank_squared == 15;
  std::string ranks;
  for (const auto& v : r.verdicts) ranks += " " + std::to_string(v.rank) + "/" + std::to_string(v.rank_squared);
  return {failure.empty() && cnot_ok,
          "corpus " + std::string(failure.empty() ? "diagonalizable" : "fails at " + failure) + ", cnot ranks" + ranks};
}

Outcome ac6() {
  double radius = 0.0, growth = -1e300, trace = 0.0;
  Rng rng(6);
  for (const auto& [name, e] : full_corpus()) {
    radius = std::max(radius, check_spectral_radius(superoperator(e)).worst);
    for (int k = 0; k < 100; ++k) {
      const ComplexMatrix a = random_ginibre(e.dim(), rng);
      growth = std::max(growth, hs_norm(apply_channel(e, a)) - hs_norm(a));
    }
    trace = std::max(trace, check_trace_property(build_attractor_space(e)).worst);
  }
  return {radius <= 1.0 + 1e-10 && growth <= 1e-12 && trace <= 1e-8,
          "max |eigenvalue| " + fmt("%.15f", radius) + ", max ||S(A)||-||A|| " + fmt("%.2e", growth) +
              ", max |Tr X| (lambda != 1) " + fmt("%.2e", trace)};
}

Outcome ac7() {
  double unital = 0.0, idem = 0.0, comm = 0.0, closure = 0.0;
  for (const auto& [name, e] : full_corpus()) {
    const AttractorSpace space = build_attractor_space(e);
    const ComplexMatrix p = attractor_projector(space).matrix();
    const ComplexMatrix s = superoperator(e).matrix();
    unital = std::max(unital, check_unitality_resolution(space).worst);
    idem = std::max(idem, (p * p - p).norm());
    comm = std::max(comm, (s * p - p * s).norm());
    closure = std::max(closure, check_closure(space).worst);
  }
  return {unital <= 1e-8 && idem <= 1e-10 && comm <= 1e-10 && closure <= 1e-8,
          "resolution " + fmt("%.2e", unital) + ", idempotence " + fmt("%.2e", idem) + ", [S,P] " +
              fmt("%.2e", comm) + ", closure " + fmt("%.2e", closure)};
}

Outcome ac8() {
  ChoiAudit worst;
  worst.min_eigenvalue = 1e300;
  auto absorb = [&](const ChoiAudit& a) {
    worst.hermiticity_residual = std::max(worst.hermiticity_residual, a.hermiticity_residual);
    worst.trace_a_residual = std::max(worst.trace_a_residual, a.trace_a_residual);
    worst.trace_b_residual = std::max(worst.trace_b_residual, a.trace_b_residual);
    worst.min_eigenvalue = std::min(worst.min_eigenvalue, a.min_eigenvalue);
  };
  for (const auto& [name, e] : builtin_corpus()) {
    const Superoperator s = superoperator(e);
    absorb(audit(reshuffle(s)));
    absorb(audit(reshuffle(s.power(5))));
    const AttractorSpace space = build_attractor_space(e);
    for (std::int64_t n = -2; n <= 2; ++n) absorb(audit(choi_of_asymptotic(space, n)));
  }
  const ChoiAudit transpose = audit(reshuffle(transpose_map(2)));
  const bool ok = worst.hermiticity_residual <= 1e-10 && worst.trace_a_residual <= 1e-9 &&
                  worst.trace_b_residual <= 1e-9 && worst.min_eigenvalue >= -1e-9 && !transpose.completely_positive;
  return {ok, "hermiticity " + fmt("%.2e", worst.hermiticity_residual) + ", Tr_A " +
                  fmt("%.2e", worst.trace_a_residual) + ", Tr_B " + fmt("%.2e", worst.trace_b_residual) +
                  ", min eigenvalue " + fmt("%.2e", worst.min_eigenvalue) + ", transpose map min eigenvalue " +
                  fmt("%.3f", transpose.min_eigenvalue) + (transpose.completely_positive ? " (CP)" : " (NOT CP)")};
}

Outcome ac9() {
  bool ok = true;
  std::string detail;
  auto expect = [&](const std::string& label, const UnitaryEnsemble& e, Regime regime, std::optional<int> period) {
    const Classification c = classify_asymptotics(build_attractor_space(e));
    const bool match = c.regime == regime && c.period == period;
    ok = ok && match;
    detail += label + "=" + std::string(to_string(c.regime)) + (c.period ? "(" + std::to_string(*c.period) + ")" : "") +
              (match ? "" : "!") + " ";
  };
  expect("cnot_pair", cnot_ensemble(), Regime::Periodic, 2);
  expect("identity", to_ensemble(builtin("identity")), Regime::Stationary, std::nullopt);
  Rng rng(9);
  for (std::size_t d : {2u, 3u, 4u}) {
    const UnitaryEnsemble mixed = validate_ensemble({{0.3, identity(d)}, {0.7, random_unitary(d, rng)}});
    expect("identity+U(d=" + std::to_string(d) + ")", mixed, Regime::Stationary, std::nullopt);
  }
  expect("diag_irrational_phase", to_ensemble(builtin("diag_irrational_phase")), Regime::Aperiodic, std::nullopt);

  int exits = 0;
  for (const auto& name : builtin_names()) exits += run_cli({"verify", "builtin:" + name}) == kExitOk;
  exits += run_cli({"verify", data_path("cnot_pair.json")}) == kExitOk;
  const int expected = static_cast<int>(builtin_names().size()) + 1;
  ok = ok && exits == expected;
  return {ok, detail + "| verify exit 0 on " + std::to_string(exits) + "/" + std::to_string(expected)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "CNOT attractor dimensions", ac1, 1.0},
      {"AC2", "CNOT asymptotic closed form", ac2, 1.0},
      {"AC3", "convergence and probability independence", ac3, 5.0},
      {"AC4", "structure theorem oracle equivalence", ac4, 30.0},
      {"AC5", "unit-circle diagonalizability", ac5, 30.0},
      {"AC6", "contraction suite", ac6, 10.0},
      {"AC7", "attractor algebra", ac7, 0.0},
      {"AC8", "dynamical matrix audit", ac8, 0.0},
      {"AC9", "classification and verify exit codes", ac9, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.passed = false;
      o.summary += ", over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    failures += !o.passed;
    std::printf("%s %s  %s: %s [%.3f s]\n", c.id, o.passed ? "PASS" : "FAIL", c.title, o.summary.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
