#include "ruo/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "json_format.hpp"
#include "ruo/asymptotics.hpp"
#include "ruo/attractors.hpp"
#include "ruo/choi.hpp"
#include "ruo/errors.hpp"
#include "ruo/io.hpp"
#include "ruo/verify.hpp"

namespace ruo {

using detail::Json;

namespace {

struct Settings {
  std::string ensemble;
  std::string state;
  std::int64_t steps = 0;
  std::optional<std::int64_t> power;
  std::optional<std::int64_t> asymptotic;
  bool full = false;
  bool allow_skip = false;
  std::uint64_t seed = VerifyOptions{}.seed;

  double unit_tol = 1e-9;
  double nullspace_tol = 1e-9;
  double cluster_radius = 1e-8;
  double convergence_threshold = 1e-8;
  int max_order = 24;
  std::size_t max_dim = 64;

  CLI::Option* unit_tol_opt = nullptr;
  CLI::Option* nullspace_tol_opt = nullptr;
  CLI::Option* convergence_opt = nullptr;
};

void add_tolerance_flags(CLI::App* sub, Settings& s) {
  s.unit_tol_opt = sub->add_option("--unit-tol", s.unit_tol, "1 - |lambda| below which lambda counts as unimodular")
                       ->capture_default_str()
                       ->check(CLI::NonNegativeNumber);
  s.nullspace_tol_opt =
      sub->add_option("--nullspace-tol", s.nullspace_tol, "relative singular-value threshold of the kernel solves")
          ->capture_default_str()
          ->check(CLI::NonNegativeNumber);
  sub->add_option("--cluster-radius", s.cluster_radius, "eigenvalue clustering radius")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  s.convergence_opt = sub->add_option("--convergence-threshold", s.convergence_threshold, "HS-norm convergence threshold")
                          ->capture_default_str()
                          ->check(CLI::NonNegativeNumber);
  sub->add_option("--max-order", s.max_order, "largest root-of-unity order for periodicity detection")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000));
  sub->add_option("--max-dim", s.max_dim, "largest accepted Hilbert-space dimension")->capture_default_str();
}

// Flags win over document overrides, which win over defaults.
AttractorOptions attractor_options(const Settings& s, const EnsembleDocument& doc) {
  AttractorOptions o;
  o.unit_circle_tol = s.unit_tol;
  o.nullspace_tol = s.nullspace_tol;
  if (s.unit_tol_opt->count() == 0 && doc.tolerances.unit_circle_tol) o.unit_circle_tol = *doc.tolerances.unit_circle_tol;
  if (s.nullspace_tol_opt->count() == 0 && doc.tolerances.nullspace_tol) o.nullspace_tol = *doc.tolerances.nullspace_tol;
  o.cluster_radius = s.cluster_radius;
  o.max_root_order = s.max_order;
  return o;
}

ConvergenceOptions convergence_options(const Settings& s, const EnsembleDocument& doc, const AttractorOptions& a) {
  ConvergenceOptions o;
  o.threshold = s.convergence_threshold;
  if (s.convergence_opt->count() == 0 && doc.tolerances.convergence_threshold) {
    o.threshold = *doc.tolerances.convergence_threshold;
  }
  o.unit_circle_tol = a.unit_circle_tol;
  return o;
}

Json ensemble_header(const EnsembleDocument& doc) {
  Json j = Json::object();
  j["name"] = doc.name.value_or("");
  j["hash"] = hash_hex(document_hash(doc));
  j["dim"] = doc.dim;
  j["members"] = doc.unitaries.size();
  return j;
}

Json root_json(const std::optional<RootOfUnity>& r) {
  if (!r) return nullptr;
  return std::to_string(r->p) + "/" + std::to_string(r->q);
}

Json spectrum_json(const UnitSpectrum& spectrum) {
  Json arr = Json::array();
  for (const auto& u : spectrum.values) {
    Json j = Json::object();
    j["lambda"] = detail::complex_json(u.lambda);
    j["phase"] = phase_0_2pi(u.lambda);
    j["multiplicity"] = u.multiplicity;
    j["root_of_unity"] = root_json(u.root);
    Json raw = Json::array();
    for (Complex z : u.raw) raw.push_back(detail::complex_json(z));
    j["raw"] = std::move(raw);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json attractors_json(const AttractorSpace& space, bool full) {
  Json j = Json::object();
  j["dim"] = space.dim();
  j["total_dim"] = space.total_dim();
  Json blocks = Json::array();
  for (const auto& b : space.blocks()) {
    Json bj = Json::object();
    bj["lambda"] = detail::complex_json(b.lambda);
    bj["root_of_unity"] = root_json(b.root);
    bj["dimension"] = b.basis.size();
    if (b.structure_angle) bj["structure_angle"] = *b.structure_angle;
    if (full) {
      Json basis = Json::array();
      for (const auto& x : b.basis) basis.push_back(detail::matrix_json(x));
      bj["basis"] = std::move(basis);
    }
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

Json classification_json(const Classification& c) {
  Json j = Json::object();
  j["regime"] = std::string(to_string(c.regime));
  j["period"] = c.period ? Json(*c.period) : Json(nullptr);
  return j;
}

Json convergence_json(const ConvergenceTrace& t, bool with_distances) {
  Json j = Json::object();
  j["threshold"] = t.threshold;
  j["subdominant_modulus"] = t.subdominant_modulus;
  j["fitted_rate"] = t.fitted_rate ? Json(*t.fitted_rate) : Json(nullptr);
  j["r_squared"] = t.r_squared ? Json(*t.r_squared) : Json(nullptr);
  j["converged"] = t.converged;
  j["converged_at"] = t.converged_at ? Json(*t.converged_at) : Json(nullptr);
  j["steps"] = t.distances.empty() ? 0 : t.distances.back().n;
  j["final_distance"] = t.distances.empty() ? Json(nullptr) : Json(t.distances.back().distance);
  if (with_distances) {
    Json d = Json::array();
    for (const auto& p : t.distances) d.push_back(Json::array({p.n, p.distance}));
    j["distances"] = std::move(d);
  }
  return j;
}

Json audit_json(const ChoiAudit& a) {
  Json j = Json::object();
  j["hermiticity_residual"] = a.hermiticity_residual;
  j["trace_a_residual"] = a.trace_a_residual;
  j["trace_b_residual"] = a.trace_b_residual;
  j["min_eigenvalue"] = a.min_eigenvalue;
  j["hermitian"] = a.hermitian;
  j["trace_preserving"] = a.trace_preserving;
  j["unital"] = a.unital;
  j["completely_positive"] = a.completely_positive;
  j["passed"] = a.passed();
  return j;
}

Json checks_json(const std::vector<CheckResult>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j = Json::object();
    j["name"] = c.name;
    j["status"] = std::string(to_string(c.status));
    j["measure"] = c.measure;
    j["threshold"] = c.threshold;
    j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

int cmd_spectrum(const Settings& s, std::ostream& out) {
  const EnsembleDocument doc = load_ensemble(s.ensemble);
  const UnitaryEnsemble e = to_ensemble(doc, {.max_dim = s.max_dim});
  const AttractorOptions opts = attractor_options(s, doc);
  const Superoperator sup = superoperator(e);
  Json j = Json::object();
  j["ensemble"] = ensemble_header(doc);
  j["unit_spectrum"] = spectrum_json(unit_spectrum(sup, opts));
  j["subdominant_modulus"] = subdominant_modulus(sup, opts.unit_circle_tol);
  out << detail::dump(j);
  return kExitOk;
}

int cmd_attractors(const Settings& s, std::ostream& out) {
  const EnsembleDocument doc = load_ensemble(s.ensemble);
  const UnitaryEnsemble e = to_ensemble(doc, {.max_dim = s.max_dim});
  const AttractorOptions opts = attractor_options(s, doc);
  const AttractorSpace space = build_attractor_space(e, opts);
  Json j = Json::object();
  j["ensemble"] = ensemble_header(doc);
  j["attractors"] = attractors_json(space, s.full);
  j["classification"] = classification_json(classify_asymptotics(space, opts.max_root_order, opts.root_tol));
  out << detail::dump(j);
  return kExitOk;
}

int cmd_evolve(const Settings& s, std::ostream& out) {
  if (s.steps < 0) throw ParameterError("evolve: --steps must be >= 0");
  const EnsembleDocument doc = load_ensemble(s.ensemble);
  const UnitaryEnsemble e = to_ensemble(doc, {.max_dim = s.max_dim});
  const DensityMatrix rho0 = load_state(s.state);
  if (rho0.dim() != e.dim()) throw ShapeError("state dimension differs from the ensemble dimension");
  const AttractorOptions opts = attractor_options(s, doc);

  Json j = Json::object();
  j["ensemble"] = ensemble_header(doc);
  j["steps"] = s.steps;
  j["state"] = detail::matrix_json(iterate(e, rho0, s.steps).matrix());
  if (s.steps >= 1) {
    const AttractorSpace space = build_attractor_space(e, opts);
    j["convergence"] = convergence_json(convergence_trace(e, space, rho0, s.steps, convergence_options(s, doc, opts)), true);
  }
  out << detail::dump(j);
  return kExitOk;
}

int cmd_asymptote(const Settings& s, std::ostream& out) {
  const EnsembleDocument doc = load_ensemble(s.ensemble);
  const UnitaryEnsemble e = to_ensemble(doc, {.max_dim = s.max_dim});
  const DensityMatrix rho0 = load_state(s.state);
  if (rho0.dim() != e.dim()) throw ShapeError("state dimension differs from the ensemble dimension");
  const AttractorSpace space = build_attractor_space(e, attractor_options(s, doc));
  Json j = Json::object();
  j["ensemble"] = ensemble_header(doc);
  j["steps"] = s.steps;
  j["state"] = detail::matrix_json(asymptotic_state(space, rho0, s.steps));
  out << detail::dump(j);
  return kExitOk;
}

int cmd_choi(const Settings& s, std::ostream& out) {
  const EnsembleDocument doc = load_ensemble(s.ensemble);
  const UnitaryEnsemble e = to_ensemble(doc, {.max_dim = s.max_dim});
  Json j = Json::object();
  j["ensemble"] = ensemble_header(doc);
  ChoiAudit report;
  if (s.asymptotic) {
    const AttractorSpace space = build_attractor_space(e, attractor_options(s, doc));
    report = audit(choi_of_asymptotic(space, *s.asymptotic));
    j["source"] = "asymptotic";
    j["n"] = *s.asymptotic;
  } else {
    const std::int64_t n = s.power.value_or(1);
    if (n < 0) throw ParameterError("choi: --power must be >= 0");
    report = audit(reshuffle(superoperator(e).power(static_cast<std::uint64_t>(n))));
    j["source"] = "power";
    j["n"] = n;
  }
  j["audit"] = audit_json(report);
  out << detail::dump(j);
  return report.passed() ? kExitOk : kExitTheorem;
}

int cmd_verify(const Settings& s, std::ostream& out) {
  const EnsembleDocument doc = load_ensemble(s.ensemble);
  const UnitaryEnsemble e = to_ensemble(doc, {.max_dim = s.max_dim});
  VerifyOptions opts;
  opts.attractor = attractor_options(s, doc);
  opts.convergence = convergence_options(s, doc, opts.attractor);
  opts.seed = s.seed;
  const Verification v = verify_ensemble(e, opts);
  const bool ok = v.passed(s.allow_skip);

  Json j = Json::object();
  j["ensemble"] = ensemble_header(doc);
  j["unit_spectrum"] = spectrum_json(v.spectrum);
  j["attractors"] = attractors_json(v.space, s.full);
  j["classification"] = classification_json(v.classification);
  j["checks"] = checks_json(v.checks);
  j["convergence"] = convergence_json(v.convergence, false);
  j["passed"] = ok;
  out << detail::dump(j);
  return ok ? kExitOk : kExitTheorem;
}

int cmd_builtin(const std::string& name, const std::optional<double>& param, std::ostream& out) {
  out << serialize_ensemble(builtin(name, param));
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attractor-space analysis of random unitary operations", "ruo"};
  app.require_subcommand(1);
  Settings s;

  const std::string file_help = "ensemble JSON file, or builtin:NAME[:PARAM]";
  auto* spectrum = app.add_subcommand("spectrum", "unit-circle spectrum with multiplicities");
  auto* attractors = app.add_subcommand("attractors", "attractor space dimensions (matrices with --full)");
  auto* evolve = app.add_subcommand("evolve", "iterate a state and trace its convergence");
  auto* asymptote = app.add_subcommand("asymptote", "closed-form asymptotic state after N steps");
  auto* choi = app.add_subcommand("choi", "dynamical-matrix audit of Phi^N or Phi_ass^N");
  auto* verify = app.add_subcommand("verify", "run every structural check");
  auto* export_builtin = app.add_subcommand("builtin", "print a built-in ensemble as JSON");

  for (auto* sub : {spectrum, attractors, evolve, asymptote, choi, verify}) {
    sub->add_option("file", s.ensemble, file_help)->required();
    add_tolerance_flags(sub, s);
  }
  attractors->add_flag("--full", s.full, "include basis matrices");
  verify->add_flag("--full", s.full, "include basis matrices");
  verify->add_flag("--allow-skip", s.allow_skip, "do not fail on SKIPPED checks");
  verify->add_option("--seed", s.seed, "seed for the random test operators")->capture_default_str();
  for (auto* sub : {evolve, asymptote}) {
    sub->add_option("--state", s.state, "state JSON file")->required();
    sub->add_option("--steps", s.steps, "number of steps N")->required();
  }
  auto* power_opt = choi->add_option("--power", s.power, "audit Phi^N (default N = 1)");
  auto* asym_opt = choi->add_option("--asymptotic", s.asymptotic, "audit Phi_ass^N for integer N");
  power_opt->excludes(asym_opt);

  std::string builtin_name;
  std::optional<double> builtin_param;
  export_builtin->add_option("name", builtin_name, "built-in ensemble name")->required();
  export_builtin->add_option("--param", builtin_param, "p1 for cnot_pair, d for identity");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(s, out);
    if (attractors->parsed()) return cmd_attractors(s, out);
    if (evolve->parsed()) return cmd_evolve(s, out);
    if (asymptote->parsed()) return cmd_asymptote(s, out);
    if (choi->parsed()) return cmd_choi(s, out);
    if (verify->parsed()) return cmd_verify(s, out);
    if (export_builtin->parsed()) return cmd_builtin(builtin_name, builtin_param, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ConsistencyError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace ruo
