#pragma once

// Closed forms for projective spin-1/2 measurements.

#include "spinmeas/povm.hpp"
#include "spinmeas/qmcore.hpp"

namespace spinmeas::spin {

/// Observables A = a·σ, B = b·σ, the initial state's Bloch direction r and the
/// apparatus axis o_a.
struct SpinConfig {
    UnitAxis a;
    UnitAxis b;
    UnitAxis r;
    UnitAxis o_a;
};

/// Angle between two axes from a clamped arccos.
double angle_between(const UnitAxis& u, const UnitAxis& v);

/// √(2 − 2 a·o_a) = 2|sin(α/2)|
double error_exact(const UnitAxis& a, const UnitAxis& o_a);

/// √(2 − 2 (b·o_a)²) = √2 |sin β|
double disturbance_exact(const UnitAxis& b, const UnitAxis& o_a);

/// √(1 − (n·r)²)
double std_dev(const UnitAxis& axis, const UnitAxis& r);

struct Bounds {
    double commutator_bound;    ///< |r·(a×b)|
    double schroedinger_extra;  ///< a·b − (a·r)(b·r)
    double schroedinger_bound;  ///< √(extra² + commutator_bound²)
};

Bounds bounds(const UnitAxis& a, const UnitAxis& b, const UnitAxis& r);

/// Full report from closed forms only.
UncertaintyReport report(const SpinConfig& config);

/// Two-outcome projective model M_{±1} = ½(1 ± o_a·σ).
MeasurementModel projective_apparatus(const UnitAxis& o_a);

/// O_B = Σ M_m† B M_m for the projective apparatus along o_a, i.e. (b·o_a) o_a·σ.
Operator2 modified_observable(const UnitAxis& b, const UnitAxis& o_a);

}  // namespace spinmeas::spin
