#pragma once

// Exact 2-dimensional quantum mechanics: Pauli algebra, spin states, the Bloch
// representation, expectation values and Larmor rotations.

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace spinmeas {

using cplx = std::complex<double>;
using Operator2 = Eigen::Matrix2cd;
using Ket2 = Eigen::Vector2cd;

namespace tol {
inline constexpr double algebraic = 1e-12;
inline constexpr double unit_norm = 1e-9;
}  // namespace tol

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Direction on the unit sphere. Construction rejects vectors whose norm
/// differs from 1 by more than tol::unit_norm; the stored vector is
/// renormalized.
class UnitAxis {
public:
    explicit UnitAxis(const Eigen::Vector3d& v);
    UnitAxis(double x, double y, double z) : UnitAxis(Eigen::Vector3d(x, y, z)) {}

    /// (cos φ sin θ, sin φ sin θ, cos θ) with θ the polar angle from +z.
    static UnitAxis from_angles(double theta, double phi);
    /// Normalizes any nonzero vector.
    static UnitAxis normalized(const Eigen::Vector3d& v);

    static UnitAxis x() { return UnitAxis(1.0, 0.0, 0.0); }
    static UnitAxis y() { return UnitAxis(0.0, 1.0, 0.0); }
    static UnitAxis z() { return UnitAxis(0.0, 0.0, 1.0); }

    const Eigen::Vector3d& vec() const { return v_; }
    double dot(const UnitAxis& other) const { return v_.dot(other.v_); }
    double polar() const;
    double azimuth() const;

    UnitAxis operator-() const { return UnitAxis(-v_, Trusted{}); }

private:
    struct Trusted {};
    UnitAxis(const Eigen::Vector3d& v, Trusted) : v_(v) {}

    Eigen::Vector3d v_;
};

/// Bloch vector of a (possibly mixed) qubit state, |r| ≤ 1.
class BlochVector {
public:
    explicit BlochVector(const Eigen::Vector3d& r);
    BlochVector(double x, double y, double z) : BlochVector(Eigen::Vector3d(x, y, z)) {}

    const Eigen::Vector3d& vec() const { return r_; }
    double norm() const { return r_.norm(); }

private:
    Eigen::Vector3d r_;
};

/// Normalized pure qubit state in the σ_z eigenbasis (c₊, c₋).
class SpinState {
public:
    /// Rejects amplitude vectors with |c₊|² + |c₋|² ≠ 1 beyond 1e-12.
    explicit SpinState(const Ket2& amplitudes);

    /// cos(θ/2)|+z⟩ + e^{iφ} sin(θ/2)|−z⟩
    static SpinState from_angles(double theta, double phi);
    /// Eigenstate of n·σ with eigenvalue +1.
    static SpinState along(const UnitAxis& n);
    /// Normalizes a nonzero vector; throws InvalidInput for a zero vector.
    static SpinState normalized(const Ket2& v);

    static SpinState plus_z() { return SpinState(Ket2(1.0, 0.0)); }
    static SpinState minus_z() { return SpinState(Ket2(0.0, 1.0)); }

    const Ket2& amplitudes() const { return amps_; }
    Operator2 density() const { return amps_ * amps_.adjoint(); }
    /// Unit Bloch vector ⟨σ_i⟩.
    UnitAxis direction() const;

private:
    Ket2 amps_;
};

namespace pauli {
Operator2 identity();
Operator2 x();
Operator2 y();
Operator2 z();
}  // namespace pauli

/// n·σ
Operator2 spin_observable(const Eigen::Vector3d& n);

bool is_hermitian(const Operator2& m, double tolerance = tol::algebraic);
bool is_unitary(const Operator2& m, double tolerance = tol::algebraic);

/// ρ = ½(1 + r·σ)
Operator2 state_from_bloch(const BlochVector& r);

/// r_i = ⟨ψ|σ_i|ψ⟩
BlochVector bloch_from_state(const SpinState& psi);

/// Bloch vector of a 2x2 density matrix, r_i = Tr(ρσ_i).
Eigen::Vector3d bloch_from_density(const Operator2& rho);

struct SpinOperator {
    Operator2 observable;
    Operator2 projector_plus;
    Operator2 projector_minus;
    SpinState eigen_plus;
    SpinState eigen_minus;
};

/// n·σ together with its spectral projectors ½(1 ± n·σ) and eigenstates.
SpinOperator spin_operator(const UnitAxis& n);

/// ⟨ψ|X|ψ⟩ for Hermitian X. Throws InvalidInput if the imaginary part
/// exceeds 1e-10.
double expectation(const Operator2& observable, const SpinState& psi);

/// U_R = exp(iα n·σ) = cos α + i sin α n·σ.
Operator2 larmor_unitary(const UnitAxis& axis, double alpha);

/// Applies exp(iα n·σ). On the Bloch sphere this is a rotation by 2α about −n.
SpinState rotate(const UnitAxis& axis, double alpha, const SpinState& psi);

/// |⟨φ|ψ⟩|, phase-insensitive overlap.
double overlap(const SpinState& a, const SpinState& b);

}  // namespace spinmeas
