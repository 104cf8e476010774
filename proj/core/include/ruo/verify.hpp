#pragma once

// End-to-end verification of an ensemble: unit spectrum, attractor space,
// asymptotic propagator, and every structural check, each reported as a
// PASS/FAIL/SKIPPED line.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ruo/asymptotics.hpp"
#include "ruo/attractors.hpp"
#include "ruo/channel.hpp"
#include "ruo/choi.hpp"

namespace ruo {

enum class CheckStatus { Pass, Fail, Skipped };

std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double measure = 0.0;    // worst residual / angle / modulus observed
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  AttractorOptions attractor;
  ConvergenceOptions convergence;
  ChoiTolerances choi;
  std::uint64_t seed = 20240917;
  int random_samples = 20;
  int positivity_samples = 50;
  // Convergence is skipped when the subdominant modulus is this close to 1.
  double slow_mixing_gap = 1e-6;
  std::int64_t max_convergence_steps = 200000;
};

struct Verification {
  UnitSpectrum spectrum;
  AttractorSpace space;
  Classification classification;
  ConvergenceTrace convergence;
  std::vector<CheckResult> checks;

  bool passed(bool allow_skipped = false) const;
};

/// Throws ConsistencyError / NumericError when the attractor space itself
/// cannot be built; every other failure is reported as a FAIL check.
Verification verify_ensemble(const UnitaryEnsemble& e, const VerifyOptions& opts = {});

/// Steps needed for the transient mu^n to fall below threshold with margin.
std::int64_t convergence_horizon(double subdominant, double threshold, std::int64_t cap);

}  // namespace ruo
