#include "spinmeas/threestate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spinmeas/errors.hpp"
#include "spinmeas/povm.hpp"

namespace spinmeas::threestate {

namespace {

constexpr double zero_vector = 1e-12;

AuxiliaryState prepare(const Operator2& y, const SpinState& psi) {
    const Ket2 v = y * psi.amplitudes();
    AuxiliaryState out;
    const double n2 = v.squaredNorm();
    if (std::sqrt(n2) < zero_vector) return out;
    out.norm = std::sqrt(n2);
    out.norm_squared = n2;
    out.state = SpinState::normalized(v);
    const double y_norm = operator_norm(y);
    out.success_probability = y_norm > 0.0 ? std::min(1.0, n2 / (y_norm * y_norm)) : 0.0;
    return out;
}

void require_bounded(const Expectations& e, const NormsSquared& n, const char* what) {
    auto check = [&](double v, bool present) {
        if (present && (!std::isfinite(v) || std::abs(v) > 1.0 + tol::unit_norm)) {
            throw InvalidInput(std::string(what) + ": spin expectation " + std::to_string(v) + " outside [-1, 1]");
        }
    };
    check(e.base, true);
    check(e.transformed, n.transformed > 0.0);
    check(e.shifted, n.shifted > 0.0);
}

}  // namespace

double operator_norm(const Operator2& x) {
    Eigen::SelfAdjointEigenSolver<Operator2> eig(x, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

ThreeStateSet auxiliary_states(const Operator2& x, const SpinState& psi) {
    if (!is_hermitian(x)) throw InvalidInput("three-state observable is not Hermitian");
    return ThreeStateSet{psi, prepare(x, psi), prepare(x + Operator2::Identity(), psi)};
}

double estimate(const Expectations& e, const NormsSquared& norms, double second_moments, const char* what) {
    if (norms.transformed < 0.0 || norms.shifted < 0.0) throw InvalidInput("negative squared norm");
    // Absent states contribute exactly zero.
    const double t = norms.transformed > 0.0 ? norms.transformed * e.transformed : 0.0;
    const double s = norms.shifted > 0.0 ? norms.shifted * e.shifted : 0.0;
    const double radicand = (second_moments - s) + (e.base + t);
    // Radicands inside the rounding floor of the summed terms are zero.
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(second_moments) + std::abs(e.base) + std::abs(t) + std::abs(s));
    if (std::abs(radicand) <= floor) return 0.0;
    return checked_sqrt(radicand, what);
}

double estimate_error(const Expectations& o_a, const NormsSquared& norms) {
    require_bounded(o_a, norms, "error estimate");
    return estimate(o_a, norms, 2.0, "three-state error");
}

double estimate_disturbance(const Expectations& o_b, const NormsSquared& norms) {
    require_bounded(o_b, norms, "disturbance estimate");
    return estimate(o_b, norms, 2.0, "three-state disturbance");
}

Expectations exact_expectations(const Operator2& output, const ThreeStateSet& set) {
    Expectations e;
    e.base = expectation(output, set.base);
    if (set.transformed.state) e.transformed = expectation(output, *set.transformed.state);
    if (set.shifted.state) e.shifted = expectation(output, *set.shifted.state);
    return e;
}

}  // namespace spinmeas::threestate
