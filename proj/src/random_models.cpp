#include "spinmeas/random_models.hpp"

#include <cmath>

namespace spinmeas {

namespace {

Matrix ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) g(i, j) = cplx(n(rng), n(rng));
    }
    return g;
}

}  // namespace

Matrix random_unitary(int dim, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(dim, dim, rng));
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= d / mag;
    }
    return q;
}

Vector random_state(int dim, Rng& rng) {
    Vector v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

Matrix random_hermitian(int dim, Rng& rng) {
    const Matrix g = ginibre(dim, dim, rng);
    return 0.5 * (g + g.adjoint());
}

UnitAxis random_axis(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return UnitAxis::normalized(Eigen::Vector3d(n(rng), n(rng), n(rng)));
}

SpinState random_spin_state(Rng& rng) {
    const Vector v = random_state(2, rng);
    return SpinState::normalized(Ket2(v(0), v(1)));
}

IndirectModel random_indirect_model(int system_dim, int probe_dim, Rng& rng) {
    IndirectModel m;
    m.system_dim = system_dim;
    m.probe_dim = probe_dim;
    m.probe_state = random_state(probe_dim, rng);
    m.interaction = random_unitary(system_dim * probe_dim, rng);
    m.meter = Matrix::Zero(probe_dim, probe_dim);
    for (int i = 0; i < probe_dim; ++i) m.meter(i, i) = static_cast<double>(i);
    return m;
}

Rng derived_rng(std::uint64_t master, std::uint64_t index, std::uint64_t sub) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(sub >> 32)};
    return Rng(seq);
}

}  // namespace spinmeas
