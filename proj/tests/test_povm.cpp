#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spinmeas/errors.hpp"
#include "spinmeas/povm.hpp"
#include "spinmeas/random_models.hpp"
#include "spinmeas/spin.hpp"

using namespace spinmeas;
using Catch::Approx;
using std::numbers::pi;

namespace {

Matrix sigma(const UnitAxis& n) { return spin_observable(n.vec()); }

Vector ket(const SpinState& s) { return s.amplitudes(); }

MeasurementModel z_model() { return spin::projective_apparatus(UnitAxis::z()); }
MeasurementModel x_model() { return spin::projective_apparatus(UnitAxis::x()); }

IndirectModel no_interaction(const Vector& xi) {
    return {2, 2, xi, Matrix::Identity(4, 4), Matrix(pauli::z())};
}

}  // namespace

TEST_CASE("MeasurementModel rejects incomplete families and repeated labels") {
    const Matrix half = 0.5 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(MeasurementModel(2, {{1.0, half}}), InvalidInput);
    const Matrix p = Matrix::Identity(2, 2) / std::sqrt(2.0);
    CHECK_THROWS_AS(MeasurementModel(2, {{1.0, p}, {1.0, p}}), InvalidInput);
    CHECK_NOTHROW(MeasurementModel(2, {{1.0, p}, {-1.0, p}}));
    CHECK_FALSE(MeasurementModel(2, {{1.0, p}, {-1.0, p}}).is_projective());
    CHECK(z_model().is_projective());
}

TEST_CASE("from_indirect without interaction") {
    Vector xi(2);
    xi << std::sqrt(0.3), cplx(0.0, std::sqrt(0.7));
    const MeasurementModel m = from_indirect(no_interaction(xi));
    REQUIRE(m.outcomes().size() == 2);
    for (const auto& o : m.outcomes()) {
        // Labels ±1 from σ_z; |m⟩ = |0⟩ for +1 and |1⟩ for −1, up to a phase.
        const double amp = std::abs(o.label > 0 ? xi(0) : xi(1));
        const cplx c = o.op(0, 0);
        CHECK(std::abs(c) == Approx(amp).margin(1e-12));
        CHECK((o.op - c * Matrix::Identity(2, 2)).norm() < 1e-12);
    }
    Rng rng(1);
    const Vector psi = random_state(2, rng);
    const auto branches = spinmeas::apply(m, psi);
    for (const auto& b : branches) CHECK(b.probability == Approx(b.label > 0 ? 0.3 : 0.7).margin(1e-12));
}

TEST_CASE("CNOT coupling reproduces the projective z measurement") {
    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = 1.0;
    cnot(2, 3) = cnot(3, 2) = 1.0;
    Vector xi = Vector::Zero(2);
    xi(0) = 1.0;
    const MeasurementModel m = from_indirect({2, 2, xi, cnot, Matrix(pauli::z())});
    for (const auto& o : m.outcomes()) {
        const Matrix expected = o.label > 0 ? Matrix(spin_operator(UnitAxis::z()).projector_plus)
                                            : Matrix(spin_operator(UnitAxis::z()).projector_minus);
        CHECK((o.op - expected).norm() < 1e-12);
    }
    CHECK(m.is_projective());
}

TEST_CASE("from_indirect validates its input") {
    Vector xi = Vector::Zero(2);
    xi(0) = 1.0;
    IndirectModel bad = no_interaction(xi);
    bad.interaction(0, 1) = 0.5;
    CHECK_THROWS_AS(from_indirect(bad), InvalidInput);

    IndirectModel degenerate = no_interaction(xi);
    degenerate.meter = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(from_indirect(degenerate), InvalidInput);

    IndirectModel unnormalized = no_interaction(2.0 * xi);
    CHECK_THROWS_AS(from_indirect(unnormalized), InvalidInput);
}

TEST_CASE("from_indirect is complete and matches the partial-trace probabilities") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int ds = 2 + trial % 2;
        const int dp = 2 + (trial / 2) % 2;
        const IndirectModel im = random_indirect_model(ds, dp, rng);
        const MeasurementModel m = from_indirect(im);
        Matrix sum = Matrix::Zero(ds, ds);
        for (const auto& o : m.outcomes()) sum += o.op.adjoint() * o.op;
        CHECK((sum - Matrix::Identity(ds, ds)).norm() < 1e-10);

        const Vector psi = random_state(ds, rng);
        const Vector out = im.interaction * oracle::kron(psi, im.probe_state);
        for (const auto& b : spinmeas::apply(m, psi)) {
            // Meter is diag(0..dp−1): outcome k selects probe basis vector k.
            const int k = static_cast<int>(std::lround(b.label));
            double p = 0.0;
            for (int i = 0; i < ds; ++i) p += std::norm(out(i * dp + k));
            CHECK(b.probability == Approx(p).margin(1e-10));
        }
    }
}

TEST_CASE("apply examples") {
    const auto z_on_up = spinmeas::apply(z_model(), ket(SpinState::plus_z()));
    REQUIRE(z_on_up.size() == 2);
    for (const auto& b : z_on_up) {
        if (b.label > 0) {
            CHECK(b.probability == Approx(1.0).margin(1e-15));
            REQUIRE(b.post_state.has_value());
            CHECK(std::abs(std::abs((*b.post_state)(0)) - 1.0) < 1e-15);
        } else {
            CHECK(b.probability == Approx(0.0).margin(1e-15));
            CHECK_FALSE(b.post_state.has_value());
        }
    }

    for (const auto& b : spinmeas::apply(x_model(), ket(SpinState::plus_z()))) CHECK(b.probability == Approx(0.5));

    const UnitAxis d = UnitAxis::normalized(Eigen::Vector3d(1, 1, 0));
    for (const auto& b : spinmeas::apply(spin::projective_apparatus(d), ket(SpinState::plus_z()))) {
        CHECK(b.probability == Approx(0.5));
        REQUIRE(b.post_state.has_value());
        const SpinState post = SpinState::normalized(*b.post_state);
        const SpinState eigen = SpinState::along(b.label > 0 ? d : -d);
        CHECK(overlap(post, eigen) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("apply probabilities sum to one") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const MeasurementModel m = from_indirect(random_indirect_model(3, 3, rng));
        double total = 0.0;
        for (const auto& b : spinmeas::apply(m, random_state(3, rng))) {
            CHECK(b.probability >= 0.0);
            total += b.probability;
        }
        CHECK(total == Approx(1.0).margin(1e-10));
    }
    CHECK_THROWS_AS(spinmeas::apply(z_model(), Vector::Ones(2)), InvalidInput);
}

TEST_CASE("nonselective examples") {
    const Matrix up = SpinState::plus_z().density();
    CHECK((nonselective(z_model(), up) - up).norm() < 1e-15);
    CHECK((nonselective(x_model(), up) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
    const Matrix mixed = 0.5 * Matrix::Identity(2, 2);
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        CHECK((nonselective(spin::projective_apparatus(random_axis(rng)), mixed) - mixed).norm() < 1e-12);
    }
    CHECK_THROWS_AS(nonselective(z_model(), Matrix::Identity(2, 2)), InvalidInput);
}

TEST_CASE("nonselective output is a density matrix") {
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        const MeasurementModel m = from_indirect(random_indirect_model(2, 3, rng));
        const Vector psi = random_state(2, rng);
        const Matrix out = nonselective(m, psi * psi.adjoint());
        CHECK((out - out.adjoint()).norm() < 1e-10);
        CHECK(std::abs(out.trace() - 1.0) < 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(out);
        CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("moment operators") {
    const UnitAxis o = UnitAxis::normalized(Eigen::Vector3d(0.3, -0.4, 0.8));
    const MeasurementModel m = spin::projective_apparatus(o);
    CHECK((moment_output_operator(m, 2) - Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((moment_output_operator(m, 1) - sigma(o)).norm() < 1e-12);

    const Matrix w = Matrix::Identity(2, 2) / std::sqrt(3.0);
    const MeasurementModel three(2, {{-1.0, w}, {0.0, w}, {1.0, w}});
    CHECK((moment_output_operator(three, 2) - (2.0 / 3.0) * Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK_THROWS_AS(moment_output_operator(m, 0), InvalidInput);

    const Matrix sy = pauli::y();
    CHECK((post_moment_operator(spin::projective_apparatus(UnitAxis::y()), sy, 1) - sy).norm() < 1e-12);
    CHECK((post_moment_operator(x_model(), sy, 2) - Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(post_moment_operator(x_model(), sy, 1).norm() < 1e-12);
    CHECK_THROWS_AS(post_moment_operator(x_model(), Matrix::Identity(3, 3), 1), InvalidInput);
}

TEST_CASE("post-measurement moments equal moments of B in the output state") {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        const MeasurementModel m = from_indirect(random_indirect_model(2, 3, rng));
        const Matrix b = random_hermitian(2, rng);
        const Vector psi = random_state(2, rng);
        const Matrix out = nonselective(m, psi * psi.adjoint());
        for (int k = 1; k <= 2; ++k) {
            Matrix bk = Matrix::Identity(2, 2);
            for (int j = 0; j < k; ++j) bk = bk * b;
            CHECK(expectation(post_moment_operator(m, b, k), psi) == Approx((out * bk).trace().real()).margin(1e-10));
        }
    }
}

TEST_CASE("rms_error examples") {
    const UnitAxis a = UnitAxis::normalized(Eigen::Vector3d(1, 2, 3));
    Rng rng(2);
    const Vector psi = random_state(2, rng);
    CHECK(rms_error(spin::projective_apparatus(a), sigma(a), psi) == Approx(0.0).margin(1e-7));
    CHECK(rms_error(spin::projective_apparatus(-a), sigma(a), psi) == Approx(2.0).margin(1e-12));
    const UnitAxis perp = UnitAxis::normalized(a.vec().cross(Eigen::Vector3d(0, 0, 1)));
    CHECK(rms_error(spin::projective_apparatus(perp), sigma(a), psi) == Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK_THROWS_AS(rms_error(z_model(), Matrix::Identity(3, 3), psi), InvalidInput);
}

TEST_CASE("rms_disturbance examples") {
    const UnitAxis b = UnitAxis::normalized(Eigen::Vector3d(-1, 0.5, 2));
    Rng rng(6);
    const Vector psi = random_state(2, rng);
    CHECK(rms_disturbance(spin::projective_apparatus(b), sigma(b), psi) == Approx(0.0).margin(1e-7));
    CHECK(rms_disturbance(spin::projective_apparatus(-b), sigma(b), psi) == Approx(0.0).margin(1e-7));
    const UnitAxis perp = UnitAxis::normalized(b.vec().cross(Eigen::Vector3d(1, 0, 0)));
    CHECK(rms_disturbance(spin::projective_apparatus(perp), sigma(b), psi) ==
          Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("Projective error equals the Pythagorean form") {
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const MeasurementModel m = spin::projective_apparatus(random_axis(rng));
        const Matrix a = sigma(random_axis(rng));
        const Vector psi = random_state(2, rng);
        CHECK(std::abs(rms_error(m, a, psi) - rms_error_projective(m, a, psi)) < 1e-12);
    }
    const Matrix w = Matrix::Identity(2, 2) / std::sqrt(2.0);
    CHECK_THROWS_AS(rms_error_projective(MeasurementModel(2, {{1.0, w}, {-1.0, w}}), Matrix(pauli::z()),
                                         ket(SpinState::plus_z())),
                    InvalidInput);
}

TEST_CASE("Error and disturbance match the Heisenberg-picture definitions") {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const int ds = 2 + trial % 2;
        const int dp = 2 + (trial / 2) % 2;
        const IndirectModel im = random_indirect_model(ds, dp, rng);
        const MeasurementModel m = from_indirect(im);
        const Matrix a = random_hermitian(ds, rng);
        const Matrix b = random_hermitian(ds, rng);
        const Vector psi = random_state(ds, rng);
        const double eps_ref = oracle::error_by_definition(im.interaction, im.meter, im.probe_state, a, psi);
        const double eta_ref = oracle::disturbance_by_definition(im.interaction, dp, im.probe_state, b, psi);
        CHECK(rms_error(m, a, psi) == Approx(eps_ref).margin(1e-9));
        CHECK(rms_error_sum_form(m, a, psi) == Approx(eps_ref).margin(1e-9));
        CHECK(rms_disturbance(m, b, psi) == Approx(eta_ref).margin(1e-9));
        CHECK(rms_disturbance_sum_form(m, b, psi) == Approx(eta_ref).margin(1e-9));
    }
}

TEST_CASE("Spin apparatus as a probe coupling agrees with the closed forms") {
    Rng rng(43);
    for (int i = 0; i < 300; ++i) {
        const UnitAxis o = random_axis(rng);
        const UnitAxis a = random_axis(rng);
        const UnitAxis b = random_axis(rng);
        const Vector psi = random_state(2, rng);
        const oracle::SpinProbe p = oracle::spin_probe(o.vec());
        CHECK(oracle::error_by_definition(p.u, p.meter, p.xi, sigma(a), psi) ==
              Approx(spin::error_exact(a, o)).margin(1e-12));
        CHECK(oracle::disturbance_by_definition(p.u, 2, p.xi, sigma(b), psi) ==
              Approx(spin::disturbance_exact(b, o)).margin(1e-12));
    }
}

TEST_CASE("State independence for projective spin models") {
    Rng rng(47);
    const UnitAxis o = random_axis(rng);
    const UnitAxis a = random_axis(rng);
    const UnitAxis b = random_axis(rng);
    const MeasurementModel m = spin::projective_apparatus(o);
    double eps_lo = 1e9, eps_hi = -1e9, eta_lo = 1e9, eta_hi = -1e9;
    for (int i = 0; i < 100; ++i) {
        const Vector psi = random_state(2, rng);
        const double e = rms_error(m, sigma(a), psi);
        const double h = rms_disturbance(m, sigma(b), psi);
        eps_lo = std::min(eps_lo, e);
        eps_hi = std::max(eps_hi, e);
        eta_lo = std::min(eta_lo, h);
        eta_hi = std::max(eta_hi, h);
    }
    CHECK(eps_hi - eps_lo < 1e-12);
    CHECK(eta_hi - eta_lo < 1e-12);
}

TEST_CASE("checked_sqrt clamps tiny negatives and rejects larger ones") {
    CHECK(checked_sqrt(4.0, "x") == 2.0);
    CHECK(checked_sqrt(-5e-11, "x") == 0.0);
    CHECK_THROWS_AS(checked_sqrt(-1e-9, "x"), InconsistentData);
    CHECK_THROWS_AS(checked_sqrt(std::nan(""), "x"), InconsistentData);
}

TEST_CASE("evaluate_relations examples") {
    const Matrix a = pauli::x();
    const Matrix b = pauli::y();
    const Vector psi = ket(SpinState::plus_z());

    const auto r = evaluate_relations(spin::projective_apparatus(UnitAxis::from_angles(pi / 2.0, pi / 6.0)), a, b, psi);
    CHECK(r.eps == Approx(2.0 * std::sin(pi / 12.0)).margin(1e-12));
    CHECK(r.eps == Approx(0.5176).margin(1e-4));
    CHECK(r.eta == Approx(std::sqrt(2.0) * std::cos(pi / 6.0)).margin(1e-12));
    CHECK(r.eta == Approx(1.2247).margin(1e-4));
    CHECK(r.heisenberg_lhs == Approx(0.634).margin(1e-3));
    CHECK_FALSE(r.heisenberg_ok);
    CHECK(r.ozawa_lhs == Approx(2.376).margin(1e-3));
    CHECK(r.ozawa_ok);
    CHECK(r.commutator_bound == Approx(1.0).margin(1e-12));

    const auto aligned = evaluate_relations(spin::projective_apparatus(UnitAxis::x()), a, b, psi);
    CHECK(aligned.eps == Approx(0.0).margin(1e-12));
    CHECK(aligned.heisenberg_lhs == Approx(0.0).margin(1e-12));
    CHECK_FALSE(aligned.heisenberg_ok);
    CHECK(aligned.ozawa_lhs == Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK(aligned.ozawa_ok);

    Rng rng(3);
    const auto same = evaluate_relations(spin::projective_apparatus(random_axis(rng)), a, a, psi);
    CHECK(same.commutator_bound == Approx(0.0).margin(1e-15));
    CHECK(same.heisenberg_ok);
    CHECK(same.ozawa_ok);
    CHECK(same.combined_ok);
}

TEST_CASE("Ozawa holds for random indirect models and the report is ordered") {
    Rng rng(53);
    for (int trial = 0; trial < 1000; ++trial) {
        const int ds = 2 + trial % 2;
        const int dp = 2 + (trial / 2) % 2;
        const MeasurementModel m = from_indirect(random_indirect_model(ds, dp, rng));
        const Matrix a = random_hermitian(ds, rng);
        const Matrix b = random_hermitian(ds, rng);
        const auto r = evaluate_relations(m, a, b, random_state(ds, rng));
        CHECK(r.ozawa_lhs >= r.commutator_bound - 1e-9);
        CHECK(r.ozawa_ok);
        CHECK(r.combined_lhs >= r.ozawa_lhs);
        CHECK(r.ozawa_lhs >= r.heisenberg_lhs);
        CHECK(r.sigma_a * r.sigma_b >= r.schroedinger_bound - 1e-12);
        CHECK(r.schroedinger_bound >= r.robertson_bound - 1e-12);
    }
}

TEST_CASE("standard_deviation") {
    CHECK(standard_deviation(Matrix(pauli::x()), ket(SpinState::plus_z())) == Approx(1.0));
    CHECK(standard_deviation(Matrix(pauli::z()), ket(SpinState::plus_z())) == Approx(0.0).margin(1e-12));
}
