#include "spinmeas/qmcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinmeas/errors.hpp"

namespace spinmeas {

namespace {

constexpr cplx I{0.0, 1.0};

std::string fmt_norm(double n) { return std::to_string(n); }

}  // namespace

UnitAxis::UnitAxis(const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol::unit_norm) {
        throw InvalidInput("axis is not a unit vector (norm " + fmt_norm(n) + ")");
    }
    v_ = v / n;
}

UnitAxis UnitAxis::from_angles(double theta, double phi) {
    const double s = std::sin(theta);
    return UnitAxis(Eigen::Vector3d(std::cos(phi) * s, std::sin(phi) * s, std::cos(theta)), Trusted{});
}

UnitAxis UnitAxis::normalized(const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || n < 1e-300) {
        throw InvalidInput("cannot normalize a zero or non-finite axis");
    }
    return UnitAxis(Eigen::Vector3d(v / n), Trusted{});
}

double UnitAxis::polar() const { return std::acos(std::clamp(v_.z(), -1.0, 1.0)); }

double UnitAxis::azimuth() const {
    if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
    return std::atan2(v_.y(), v_.x());
}

BlochVector::BlochVector(const Eigen::Vector3d& r) : r_(r) {
    const double n = r.norm();
    if (!std::isfinite(n) || n > 1.0 + tol::unit_norm) {
        throw InvalidInput("Bloch vector outside the unit ball (norm " + fmt_norm(n) + ")");
    }
}

SpinState::SpinState(const Ket2& amplitudes) : amps_(amplitudes) {
    const double n2 = amplitudes.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > tol::algebraic) {
        throw InvalidInput("spin state is not normalized (|c+|^2+|c-|^2 = " + fmt_norm(n2) + ")");
    }
}

SpinState SpinState::from_angles(double theta, double phi) {
    return SpinState(Ket2(std::cos(theta / 2.0), std::exp(I * phi) * std::sin(theta / 2.0)));
}

SpinState SpinState::along(const UnitAxis& n) { return from_angles(n.polar(), n.azimuth()); }

SpinState SpinState::normalized(const Ket2& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || n < 1e-300) {
        throw InvalidInput("cannot normalize a zero or non-finite state vector");
    }
    return SpinState(Ket2(v / n));
}

UnitAxis SpinState::direction() const { return UnitAxis::normalized(bloch_from_state(*this).vec()); }

namespace pauli {
Operator2 identity() { return Operator2::Identity(); }
Operator2 x() {
    Operator2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
Operator2 y() {
    Operator2 m;
    m << 0.0, -I, I, 0.0;
    return m;
}
Operator2 z() {
    Operator2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
}  // namespace pauli

Operator2 spin_observable(const Eigen::Vector3d& n) {
    Operator2 m;
    m << n.z(), cplx(n.x(), -n.y()), cplx(n.x(), n.y()), -n.z();
    return m;
}

bool is_hermitian(const Operator2& m, double tolerance) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_unitary(const Operator2& m, double tolerance) {
    return (m.adjoint() * m - Operator2::Identity()).cwiseAbs().maxCoeff() <= tolerance;
}

Operator2 state_from_bloch(const BlochVector& r) {
    return 0.5 * (Operator2::Identity() + spin_observable(r.vec()));
}

Eigen::Vector3d bloch_from_density(const Operator2& rho) {
    // ρ₁₀ = (r_x + i r_y) / 2
    return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

BlochVector bloch_from_state(const SpinState& psi) {
    const cplx cp = psi.amplitudes()(0);
    const cplx cm = psi.amplitudes()(1);
    const cplx off = std::conj(cp) * cm;
    return BlochVector(Eigen::Vector3d(2.0 * off.real(), 2.0 * off.imag(), std::norm(cp) - std::norm(cm)));
}

SpinOperator spin_operator(const UnitAxis& n) {
    const Operator2 obs = spin_observable(n.vec());
    const Operator2 id = Operator2::Identity();
    return SpinOperator{obs, 0.5 * (id + obs), 0.5 * (id - obs), SpinState::along(n), SpinState::along(-n)};
}

double expectation(const Operator2& observable, const SpinState& psi) {
    const cplx value = psi.amplitudes().dot(observable * psi.amplitudes());
    if (std::abs(value.imag()) > 1e-10) {
        throw InvalidInput("expectation of a non-Hermitian operator (imaginary part " +
                           fmt_norm(value.imag()) + ")");
    }
    // Pauli decomposition against the unit Bloch vector.
    const double offset = 0.5 * (observable(0, 0).real() + observable(1, 1).real());
    const Eigen::Vector3d field(observable(1, 0).real(), observable(1, 0).imag(),
                                0.5 * (observable(0, 0).real() - observable(1, 1).real()));
    return offset + field.dot(psi.direction().vec());
}

Operator2 larmor_unitary(const UnitAxis& axis, double alpha) {
    return std::cos(alpha) * Operator2::Identity() + I * std::sin(alpha) * spin_observable(axis.vec());
}

SpinState rotate(const UnitAxis& axis, double alpha, const SpinState& psi) {
    return SpinState::normalized(larmor_unitary(axis, alpha) * psi.amplitudes());
}

double overlap(const SpinState& a, const SpinState& b) {
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace spinmeas
