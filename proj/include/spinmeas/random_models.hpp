#pragma once

// Seeded random generation of states, observables and indirect measurement
// models for property checks.

#include <random>

#include "spinmeas/povm.hpp"
#include "spinmeas/qmcore.hpp"

namespace spinmeas {

using Rng = std::mt19937_64;

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal folded back into Q.
Matrix random_unitary(int dim, Rng& rng);

/// Uniformly distributed unit vector in C^dim.
Vector random_state(int dim, Rng& rng);

/// Hermitian matrix (G + G†)/2 with complex Gaussian G.
Matrix random_hermitian(int dim, Rng& rng);

UnitAxis random_axis(Rng& rng);
SpinState random_spin_state(Rng& rng);

/// Haar-random interaction, random probe state and the computational-basis
/// meter with labels 0..probe_dim−1.
IndirectModel random_indirect_model(int system_dim, int probe_dim, Rng& rng);

/// Independent stream for sub-task `index` of a run seeded with `master`.
Rng derived_rng(std::uint64_t master, std::uint64_t index, std::uint64_t sub = 0);

}  // namespace spinmeas
