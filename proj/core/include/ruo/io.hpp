#pragma once

// Ensemble and state documents (JSON, complex entries as [re, im] pairs),
// the built-in example library, and report re-ingestion.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruo/attractors.hpp"
#include "ruo/channel.hpp"

namespace ruo {

struct ToleranceOverrides {
  std::optional<double> unit_circle_tol;
  std::optional<double> nullspace_tol;
  std::optional<double> convergence_threshold;
};

/// Parsed but not yet validated ensemble description.
struct EnsembleDocument {
  std::size_t dim = 0;
  std::optional<std::string> name;
  std::vector<EnsembleMember> unitaries;
  ToleranceOverrides tolerances;
};

/// Structural parse with path-precise diagnostics; throws ParseError.
EnsembleDocument parse_ensemble(std::string_view text);

/// Canonical JSON text of a document (fixed number formatting).
std::string serialize_ensemble(const EnsembleDocument& doc);

/// validate_ensemble on the document's members.
UnitaryEnsemble to_ensemble(const EnsembleDocument& doc, const EnsembleLimits& limits = {});

/// FNV-1a 64 of serialize_ensemble(doc).
std::uint64_t document_hash(const EnsembleDocument& doc);
std::string hash_hex(std::uint64_t h);

/// {"state": [[[re, im], ...], ...]}; throws ParseError or ValidationError.
DensityMatrix parse_state(std::string_view text);
std::string serialize_state(const ComplexMatrix& rho);

/// Names accepted by builtin().
std::vector<std::string> builtin_names();

/// cnot_pair (parameter p1, default 0.5), identity (parameter d, default 2),
/// single_unitary_pauli_x, diag_irrational_phase. Throws ParameterError for
/// unknown names or out-of-range parameters.
EnsembleDocument builtin(std::string_view name, std::optional<double> parameter = {});

/// "builtin:NAME" or "builtin:NAME:PARAM" selects a built-in; anything else is
/// read as a file path.
EnsembleDocument load_ensemble(const std::string& source);
DensityMatrix load_state(const std::string& path);

/// Reads the attractor space back from a report produced with full matrices.
AttractorSpace attractor_space_from_report(std::string_view text);

/// The two CNOT gates C1|i,j> = |i, i xor j>, C2|i,j> = |i xor j, j> in the
/// computational basis |00>, |01>, |10>, |11>.
ComplexMatrix cnot_c1();
ComplexMatrix cnot_c2();

}  // namespace ruo
