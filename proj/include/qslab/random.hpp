#pragma once

// Random states, Hamiltonians and Lindblad generators for property checks.

#include "qslab/lindblad.hpp"

#include <random>

namespace qslab::random {

using Engine = std::mt19937_64;

/// Haar-random unit vector.
ComplexVector ket(Index d, Engine& rng);
/// Hermitian matrix with independent standard normal entries (GUE-like).
ComplexMatrix hermitian(Index d, Engine& rng);
/// Complex Ginibre matrix.
ComplexMatrix ginibre(Index d, Engine& rng);
/// Random drift plus `jumps` Ginibre jump operators with rates in (0, 1],
/// Half convention.
LindbladGenerator generator(Index d, int jumps, Engine& rng);
/// Random full-rank density matrix.
ComplexMatrix density(Index d, Engine& rng);

}  // namespace qslab::random
