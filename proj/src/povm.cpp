#include "spinmeas/povm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinmeas/errors.hpp"

namespace spinmeas {

namespace {

void require_square(const Matrix& m, int dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw InvalidInput(std::string(what) + ": expected a " + std::to_string(dim) + "x" +
                           std::to_string(dim) + " matrix");
    }
}

void require_state(const Vector& psi, int dim) {
    if (psi.size() != dim) {
        throw InvalidInput("state dimension " + std::to_string(psi.size()) + " does not match model dimension " +
                           std::to_string(dim));
    }
    if (std::abs(psi.squaredNorm() - 1.0) > tol::algebraic) {
        throw InvalidInput("state is not normalized");
    }
}

void require_hermitian(const Matrix& m, const char* what) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::algebraic) {
        throw InvalidInput(std::string(what) + " is not Hermitian");
    }
}

Matrix matrix_power(const Matrix& m, int k) {
    Matrix out = Matrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

}  // namespace

MeasurementModel::MeasurementModel(int dimension, std::vector<Outcome> outcomes)
    : dim_(dimension), outcomes_(std::move(outcomes)) {
    if (dim_ < 1) throw InvalidInput("measurement model dimension must be positive");
    if (outcomes_.empty()) throw InvalidInput("measurement model has no outcomes");
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        require_square(outcomes_[i].op, dim_, "measurement operator");
        for (std::size_t j = 0; j < i; ++j) {
            if (outcomes_[i].label == outcomes_[j].label) {
                throw InvalidInput("duplicate outcome label " + std::to_string(outcomes_[i].label));
            }
        }
        sum += outcomes_[i].op.adjoint() * outcomes_[i].op;
    }
    const double defect = (sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (defect > tol::completeness) {
        throw InvalidInput("measurement operators are not complete (max |ΣM†M − 1| = " + std::to_string(defect) +
                           ")");
    }
}

bool MeasurementModel::is_projective(double tolerance) const {
    return std::all_of(outcomes_.begin(), outcomes_.end(), [&](const Outcome& o) {
        return (o.op - o.op.adjoint()).cwiseAbs().maxCoeff() <= tolerance &&
               (o.op * o.op - o.op).cwiseAbs().maxCoeff() <= tolerance;
    });
}

MeasurementModel from_indirect(const IndirectModel& model) {
    const int ds = model.system_dim;
    const int dp = model.probe_dim;
    if (ds < 1 || dp < 1) throw InvalidInput("indirect model dimensions must be positive");
    const int dc = ds * dp;
    require_square(model.interaction, dc, "interaction");
    require_square(model.meter, dp, "meter");
    if (model.probe_state.size() != dp) throw InvalidInput("probe state has the wrong dimension");
    if (std::abs(model.probe_state.squaredNorm() - 1.0) > tol::completeness) {
        throw InvalidInput("probe state is not normalized");
    }
    if ((model.interaction.adjoint() * model.interaction - Matrix::Identity(dc, dc)).cwiseAbs().maxCoeff() >
        tol::completeness) {
        throw InvalidInput("interaction is not unitary");
    }
    require_hermitian(model.meter, "meter observable");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(model.meter);
    const Eigen::VectorXd& labels = eig.eigenvalues();
    for (int i = 1; i < dp; ++i) {
        if (labels(i) - labels(i - 1) < 1e-9) throw InvalidInput("meter observable is degenerate");
    }

    std::vector<Outcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(dp));
    for (int m = 0; m < dp; ++m) {
        const Vector meter_vec = eig.eigenvectors().col(m);
        Matrix op = Matrix::Zero(ds, ds);
        for (int i = 0; i < ds; ++i) {
            for (int j = 0; j < ds; ++j) {
                cplx acc = 0.0;
                for (int k = 0; k < dp; ++k) {
                    for (int l = 0; l < dp; ++l) {
                        acc += std::conj(meter_vec(k)) * model.interaction(i * dp + k, j * dp + l) *
                               model.probe_state(l);
                    }
                }
                op(i, j) = acc;
            }
        }
        outcomes.push_back({labels(m), std::move(op)});
    }
    return MeasurementModel(ds, std::move(outcomes));
}

std::vector<Branch> apply(const MeasurementModel& model, const Vector& psi) {
    require_state(psi, model.dimension());
    std::vector<Branch> branches;
    branches.reserve(model.outcomes().size());
    for (const auto& o : model.outcomes()) {
        const Vector out = o.op * psi;
        const double p = out.squaredNorm();
        Branch b{o.label, p, std::nullopt};
        if (p >= tol::zero_probability) b.post_state = out / std::sqrt(p);
        branches.push_back(std::move(b));
    }
    return branches;
}

Matrix nonselective(const MeasurementModel& model, const Matrix& rho) {
    const int d = model.dimension();
    require_square(rho, d, "density matrix");
    require_hermitian(rho, "density matrix");
    if (std::abs(rho.trace() - cplx(1.0)) > tol::completeness) throw InvalidInput("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol::completeness) throw InvalidInput("density matrix is not positive");

    Matrix out = Matrix::Zero(d, d);
    for (const auto& o : model.outcomes()) out += o.op * rho * o.op.adjoint();
    return out;
}

Matrix moment_output_operator(const MeasurementModel& model, int k) {
    if (k < 1) throw InvalidInput("moment order must be positive");
    const int d = model.dimension();
    Matrix out = Matrix::Zero(d, d);
    for (const auto& o : model.outcomes()) out += std::pow(o.label, k) * (o.op.adjoint() * o.op);
    return out;
}

Matrix post_moment_operator(const MeasurementModel& model, const Matrix& observable, int k) {
    if (k < 1) throw InvalidInput("moment order must be positive");
    const int d = model.dimension();
    require_square(observable, d, "observable");
    require_hermitian(observable, "observable");
    const Matrix bk = matrix_power(observable, k);
    Matrix out = Matrix::Zero(d, d);
    for (const auto& o : model.outcomes()) out += o.op.adjoint() * bk * o.op;
    return out;
}

double checked_sqrt(double radicand, const char* what) {
    if (!std::isfinite(radicand)) throw InconsistentData(std::string(what) + ": non-finite squared value");
    if (radicand < -tol::radicand) {
        throw InconsistentData(std::string(what) + ": squared value " + std::to_string(radicand) +
                               " is negative beyond round-off");
    }
    return radicand <= 0.0 ? 0.0 : std::sqrt(radicand);
}

double expectation(const Matrix& observable, const Vector& psi) {
    const cplx value = psi.dot(observable * psi);
    if (std::abs(value.imag()) > 1e-10) throw InvalidInput("expectation of a non-Hermitian operator");
    return value.real();
}

double rms_error(const MeasurementModel& model, const Matrix& a, const Vector& psi) {
    const int d = model.dimension();
    require_square(a, d, "observable A");
    require_hermitian(a, "observable A");
    require_state(psi, d);
    const Matrix o1 = moment_output_operator(model, 1);
    const Matrix o2 = moment_output_operator(model, 2);
    const Matrix op = o2 - o1 * a - a * o1 + a * a;
    return checked_sqrt(expectation(op, psi), "rms error");
}

double rms_error_sum_form(const MeasurementModel& model, const Matrix& a, const Vector& psi) {
    const int d = model.dimension();
    require_square(a, d, "observable A");
    require_state(psi, d);
    const Vector a_psi = a * psi;
    double sum = 0.0;
    for (const auto& o : model.outcomes()) sum += (o.op * (o.label * psi - a_psi)).squaredNorm();
    return std::sqrt(sum);
}

double rms_error_projective(const MeasurementModel& model, const Matrix& a, const Vector& psi) {
    if (!model.is_projective()) throw InvalidInput("Pythagorean error form requires a projective model");
    const int d = model.dimension();
    require_square(a, d, "observable A");
    require_state(psi, d);
    Matrix o_a = Matrix::Zero(d, d);
    for (const auto& o : model.outcomes()) o_a += o.label * o.op;
    return ((o_a - a) * psi).norm();
}

double rms_disturbance(const MeasurementModel& model, const Matrix& b, const Vector& psi) {
    const int d = model.dimension();
    require_square(b, d, "observable B");
    require_state(psi, d);
    const Matrix o1 = post_moment_operator(model, b, 1);
    const Matrix o2 = post_moment_operator(model, b, 2);
    const Matrix op = o2 - o1 * b - b * o1 + b * b;
    return checked_sqrt(expectation(op, psi), "rms disturbance");
}

double rms_disturbance_sum_form(const MeasurementModel& model, const Matrix& b, const Vector& psi) {
    const int d = model.dimension();
    require_square(b, d, "observable B");
    require_state(psi, d);
    double sum = 0.0;
    for (const auto& o : model.outcomes()) sum += ((o.op * b - b * o.op) * psi).squaredNorm();
    return std::sqrt(sum);
}

double standard_deviation(const Matrix& observable, const Vector& psi) {
    const double mean = expectation(observable, psi);
    const double second = expectation(observable * observable, psi);
    return checked_sqrt(second - mean * mean, "standard deviation");
}

UncertaintyReport make_report(double eps, double eta, double sigma_a, double sigma_b, double commutator_bound,
                              double anticommutator_term) {
    UncertaintyReport r;
    r.eps = eps;
    r.eta = eta;
    r.sigma_a = sigma_a;
    r.sigma_b = sigma_b;
    r.commutator_bound = commutator_bound;
    r.robertson_bound = commutator_bound;
    r.anticommutator_term = anticommutator_term;
    r.schroedinger_bound = std::hypot(anticommutator_term, commutator_bound);
    r.heisenberg_lhs = eps * eta;
    r.ozawa_lhs = eps * eta + eps * sigma_b + sigma_a * eta;
    r.combined_lhs = (eps + sigma_a) * (eta + sigma_b);
    r.heisenberg_ok = r.heisenberg_lhs >= commutator_bound - relation_slack;
    r.ozawa_ok = r.ozawa_lhs >= commutator_bound - relation_slack;
    r.combined_ok = r.combined_lhs >= commutator_bound - relation_slack;
    return r;
}

UncertaintyReport evaluate_relations(const MeasurementModel& model, const Matrix& a, const Matrix& b,
                                     const Vector& psi) {
    const int d = model.dimension();
    require_square(b, d, "observable B");
    require_hermitian(b, "observable B");
    const double eps = rms_error(model, a, psi);
    const double eta = rms_disturbance(model, b, psi);

    const cplx comm = psi.dot((a * b - b * a) * psi);
    const double mean_a = expectation(a, psi);
    const double mean_b = expectation(b, psi);
    const double anti = 0.5 * expectation(Matrix(a * b + b * a), psi) - mean_a * mean_b;

    return make_report(eps, eta, standard_deviation(a, psi), standard_deviation(b, psi), 0.5 * std::abs(comm),
                       anti);
}

}  // namespace spinmeas
