#include "ruo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json_format.hpp"
#include "ruo/errors.hpp"

namespace ruo {

using detail::Json;

namespace {

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

const Json& require_field(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

double require_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number, got " + j.dump());
  return j.get<double>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json ensemble_json(const EnsembleDocument& doc) {
  Json j = Json::object();
  if (doc.name) j["name"] = *doc.name;
  j["dim"] = doc.dim;
  Json members = Json::array();
  for (const auto& m : doc.unitaries) {
    Json item = Json::object();
    item["probability"] = m.probability;
    item["matrix"] = detail::matrix_json(m.unitary);
    members.push_back(std::move(item));
  }
  j["unitaries"] = std::move(members);
  const auto& t = doc.tolerances;
  if (t.unit_circle_tol || t.nullspace_tol || t.convergence_threshold) {
    Json tol = Json::object();
    if (t.unit_circle_tol) tol["unit_circle_tol"] = *t.unit_circle_tol;
    if (t.nullspace_tol) tol["nullspace_tol"] = *t.nullspace_tol;
    if (t.convergence_threshold) tol["convergence_threshold"] = *t.convergence_threshold;
    j["tolerances"] = std::move(tol);
  }
  return j;
}

EnsembleDocument single(std::string name, ComplexMatrix u) {
  EnsembleDocument doc;
  doc.dim = static_cast<std::size_t>(u.rows());
  doc.name = std::move(name);
  doc.unitaries.push_back({1.0, std::move(u)});
  return doc;
}

}  // namespace

EnsembleDocument parse_ensemble(std::string_view text) {
  const Json j = parse_json(text, "ensemble");
  if (!j.is_object()) throw ParseError("ensemble: top level must be an object");

  EnsembleDocument doc;
  const Json& dim = require_field(j, "dim", "ensemble");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
    throw ParseError("ensemble.dim: expected a positive integer, got " + dim.dump());
  }
  doc.dim = dim.get<std::size_t>();

  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw ParseError("ensemble.name: expected a string");
    doc.name = it->get<std::string>();
  }

  const Json& members = require_field(j, "unitaries", "ensemble");
  if (!members.is_array() || members.empty()) throw ParseError("ensemble.unitaries: expected a non-empty list");
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string path = "unitaries[" + std::to_string(i) + "]";
    const Json& item = members[i];
    if (!item.is_object()) throw ParseError(path + ": expected an object");
    EnsembleMember m;
    m.probability = require_number(require_field(item, "probability", path), path + ".probability");
    m.unitary = detail::matrix_from_json(require_field(item, "matrix", path), path + ".matrix", doc.dim);
    doc.unitaries.push_back(std::move(m));
  }

  if (auto it = j.find("tolerances"); it != j.end()) {
    if (!it->is_object()) throw ParseError("ensemble.tolerances: expected an object");
    auto read = [&](const char* key, std::optional<double>& slot) {
      if (auto f = it->find(key); f != it->end()) {
        slot = require_number(*f, std::string("tolerances.") + key);
        if (!(*slot >= 0.0)) throw ParseError(std::string("tolerances.") + key + ": must be >= 0");
      }
    };
    read("unit_circle_tol", doc.tolerances.unit_circle_tol);
    read("nullspace_tol", doc.tolerances.nullspace_tol);
    read("convergence_threshold", doc.tolerances.convergence_threshold);
  }
  return doc;
}

std::string serialize_ensemble(const EnsembleDocument& doc) { return detail::dump(ensemble_json(doc)); }

UnitaryEnsemble to_ensemble(const EnsembleDocument& doc, const EnsembleLimits& limits) {
  return validate_ensemble(doc.unitaries, limits);
}

std::uint64_t document_hash(const EnsembleDocument& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_ensemble(doc)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DensityMatrix parse_state(std::string_view text) {
  const Json j = parse_json(text, "state");
  if (!j.is_object()) throw ParseError("state: top level must be an object");
  std::optional<std::size_t> dim;
  if (auto it = j.find("dim"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() <= 0) throw ParseError("state.dim: expected a positive integer");
    dim = it->get<std::size_t>();
  }
  return DensityMatrix(detail::matrix_from_json(require_field(j, "state", "state"), "state", dim));
}

std::string serialize_state(const ComplexMatrix& rho) {
  Json j = Json::object();
  j["dim"] = rho.rows();
  j["state"] = detail::matrix_json(rho);
  return detail::dump(j);
}

ComplexMatrix cnot_c1() {
  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c(i * 2 + (i ^ j), i * 2 + j) = 1.0;
  }
  return c;
}

ComplexMatrix cnot_c2() {
  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c((i ^ j) * 2 + j, i * 2 + j) = 1.0;
  }
  return c;
}

std::vector<std::string> builtin_names() {
  return {"cnot_pair", "identity", "single_unitary_pauli_x", "diag_irrational_phase"};
}

EnsembleDocument builtin(std::string_view name, std::optional<double> parameter) {
  if (name == "cnot_pair") {
    const double p1 = parameter.value_or(0.5);
    if (!(p1 > 0.0 && p1 < 1.0)) throw ParameterError("cnot_pair: p1 must lie in (0, 1), got " + fmt_g(p1));
    EnsembleDocument doc;
    doc.dim = 4;
    doc.name = "cnot_pair(p1=" + fmt_g(p1) + ")";
    doc.unitaries.push_back({p1, cnot_c1()});
    doc.unitaries.push_back({1.0 - p1, cnot_c2()});
    return doc;
  }
  if (name == "identity") {
    const double d = parameter.value_or(2.0);
    if (!(d >= 1.0 && d <= 64.0) || d != std::floor(d)) {
      throw ParameterError("identity: d must be an integer in [1, 64], got " + fmt_g(d));
    }
    const auto n = static_cast<std::size_t>(d);
    return single("identity(d=" + std::to_string(n) + ")", identity(n));
  }
  if (parameter) throw ParameterError(std::string(name) + ": takes no parameter");
  if (name == "single_unitary_pauli_x") {
    ComplexMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    return single("single_unitary_pauli_x", std::move(x));
  }
  if (name == "diag_irrational_phase") {
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, std::numbers::pi * std::numbers::sqrt2);
    return single("diag_irrational_phase", std::move(u));
  }
  throw ParameterError("unknown builtin ensemble \"" + std::string(name) + "\"");
}

EnsembleDocument load_ensemble(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string rest = source.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) return builtin(rest);
    const std::string param = rest.substr(colon + 1);
    char* end = nullptr;
    const double value = std::strtod(param.c_str(), &end);
    if (param.empty() || end != param.c_str() + param.size()) {
      throw ParameterError("builtin parameter \"" + param + "\" is not a number");
    }
    return builtin(rest.substr(0, colon), value);
  }
  return parse_ensemble(read_file(source));
}

DensityMatrix load_state(const std::string& path) { return parse_state(read_file(path)); }

AttractorSpace attractor_space_from_report(std::string_view text) {
  const Json j = parse_json(text, "report");
  if (!j.is_object()) throw ParseError("report: top level must be an object");
  const Json& atr = require_field(j, "attractors", "report");
  const Json& dim_field = require_field(atr, "dim", "attractors");
  if (!dim_field.is_number_integer()) throw ParseError("attractors.dim: expected an integer");
  const auto dim = dim_field.get<std::size_t>();

  std::vector<AttractorBlock> blocks;
  const Json& arr = require_field(atr, "blocks", "attractors");
  if (!arr.is_array()) throw ParseError("attractors.blocks: expected a list");
  for (std::size_t b = 0; b < arr.size(); ++b) {
    const std::string path = "attractors.blocks[" + std::to_string(b) + "]";
    AttractorBlock block;
    block.lambda = detail::complex_from_json(require_field(arr[b], "lambda", path), path + ".lambda");
    block.root = snap_root_of_unity(block.lambda);
    auto basis = arr[b].find("basis");
    if (basis == arr[b].end()) throw ParseError(path + ": no basis matrices (report was not produced with --full)");
    if (!basis->is_array()) throw ParseError(path + ".basis: expected a list of matrices");
    for (std::size_t k = 0; k < basis->size(); ++k) {
      block.basis.push_back(
          detail::matrix_from_json((*basis)[k], path + ".basis[" + std::to_string(k) + "]", dim));
    }
    blocks.push_back(std::move(block));
  }
  return AttractorSpace(dim, std::move(blocks));
}

}  // namespace ruo
