#pragma once

// Three-state method: ε and η reconstructed from expectation values of the
// apparatus output in ψ, Xψ/‖Xψ‖ and (X+1)ψ/‖(X+1)ψ‖.

#include <optional>

#include "spinmeas/qmcore.hpp"

namespace spinmeas::threestate {

/// A state prepared as Yψ/‖Yψ‖. `state` is absent when Yψ vanishes; the norm
/// is then recorded as 0.
struct AuxiliaryState {
    std::optional<SpinState> state;
    double norm = 0.0;
    double norm_squared = 0.0;
    /// ‖Yψ‖² / ‖Y‖² with ‖Y‖ the operator norm.
    double success_probability = 0.0;
};

struct ThreeStateSet {
    SpinState base;
    AuxiliaryState transformed;  ///< Y = X
    AuxiliaryState shifted;      ///< Y = X + 1
};

/// Largest |eigenvalue| of a Hermitian 2x2 operator.
double operator_norm(const Operator2& x);

ThreeStateSet auxiliary_states(const Operator2& x, const SpinState& psi);

/// Expectation values of the measured output operator in the three normalized
/// input states. Entries for absent states are ignored.
struct Expectations {
    double base = 0.0;
    double transformed = 0.0;
    double shifted = 0.0;
};

/// Squared norms ‖Xψ‖², ‖(X+1)ψ‖² that rescale the normalized expectations
/// back to the unnormalized bra-kets.
struct NormsSquared {
    double transformed = 0.0;
    double shifted = 0.0;

    static NormsSquared of(const ThreeStateSet& set) {
        return {set.transformed.norm_squared, set.shifted.norm_squared};
    }
};

/// General form:
///   value² = ⟨X²⟩ + ⟨O⁽²⁾⟩ + ⟨O⟩_ψ + ‖Xψ‖²⟨O⟩_Xψ − ‖(X+1)ψ‖²⟨O⟩_(X+1)ψ
/// where `second_moments` = ⟨X²⟩ + ⟨O⁽²⁾⟩. Throws InconsistentData for a
/// radicand below −1e-10.
double estimate(const Expectations& e, const NormsSquared& norms, double second_moments, const char* what);

/// Spin-1/2 form (A² = O_A⁽²⁾ = 1): ε(A)² = 2 + ⟨O_A⟩_ψ + ⟨O_A⟩_Aψ − ⟨O_A⟩_(A+1)ψ
/// with unnormalized bra-kets. Expectations must lie in [−1, 1].
double estimate_error(const Expectations& o_a, const NormsSquared& norms);

/// Spin-1/2 form of η(B) from expectations of O_B = Σ M_m†BM_m.
double estimate_disturbance(const Expectations& o_b, const NormsSquared& norms);

/// Exact expectations of `output` in the three states (for noiseless checks).
Expectations exact_expectations(const Operator2& output, const ThreeStateSet& set);

}  // namespace spinmeas::threestate
