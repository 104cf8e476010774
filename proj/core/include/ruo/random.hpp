#pragma once

// Seeded random operators. Built only on std::mt19937_64 raw output so the
// same seed gives the same matrices on every standard library.

#include <cstddef>
#include <cstdint>
#include <random>

#include "ruo/channel.hpp"
#include "ruo/matrix.hpp"

namespace ruo {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Entries with independent standard normal real and imaginary parts.
ComplexMatrix random_ginibre(std::size_t d, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(std::size_t d, Rng& rng);

/// G G^dagger / Tr(G G^dagger) for Ginibre G: full rank almost surely.
DensityMatrix random_density(std::size_t d, Rng& rng);

}  // namespace ruo
