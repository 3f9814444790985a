#pragma once

// Finite-dimensional measurement models: measurement operators, POVMs, moment
// operators, rms error and disturbance, and the uncertainty relations built on
// them.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spinmeas/qmcore.hpp"

namespace spinmeas {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double completeness = 1e-10;
inline constexpr double radicand = 1e-10;
inline constexpr double zero_probability = 1e-14;
}  // namespace tol

struct Outcome {
    double label;
    Matrix op;
};

/// Outcome-labelled measurement operators {m, M_m} on a d-dimensional system.
/// The constructor enforces Σ M_m†M_m = 1 within tol::completeness and
/// distinct labels.
class MeasurementModel {
public:
    MeasurementModel(int dimension, std::vector<Outcome> outcomes);

    int dimension() const { return dim_; }
    const std::vector<Outcome>& outcomes() const { return outcomes_; }

    /// True when every M_m is an orthogonal projector.
    bool is_projective(double tolerance = 1e-10) const;

private:
    int dim_;
    std::vector<Outcome> outcomes_;
};

/// Indirect measurement model (K, |ξ⟩, U, M). The composite space is ordered
/// system ⊗ probe, i.e. basis index = i_system * probe_dim + i_probe.
struct IndirectModel {
    int system_dim;
    int probe_dim;
    Vector probe_state;
    Matrix interaction;
    Matrix meter;
};

/// M_m = ⟨m|U|ξ⟩ where |m⟩ runs over the meter eigenvectors, labelled by the
/// meter eigenvalues. Throws InvalidInput for a non-unitary U, an unnormalized
/// ξ or a degenerate meter.
MeasurementModel from_indirect(const IndirectModel& model);

struct Branch {
    double label;
    double probability;
    std::optional<Vector> post_state;  ///< absent when probability < 1e-14
};

/// Outcome statistics and conditional post-measurement states for a pure input.
std::vector<Branch> apply(const MeasurementModel& model, const Vector& psi);

/// Tρ = Σ M_m ρ M_m†
Matrix nonselective(const MeasurementModel& model, const Matrix& rho);

/// O^{(k)} = Σ m^k M_m†M_m
Matrix moment_output_operator(const MeasurementModel& model, int k);

/// O_B^{(k)} = Σ M_m† B^k M_m
Matrix post_moment_operator(const MeasurementModel& model, const Matrix& observable, int k);

/// ε(A) from moment operators: ⟨O⁽²⁾ − O⁽¹⁾A − AO⁽¹⁾ + A²⟩.
double rms_error(const MeasurementModel& model, const Matrix& a, const Vector& psi);
/// ε(A)² = Σ ‖M_m(m − A)ψ‖²
double rms_error_sum_form(const MeasurementModel& model, const Matrix& a, const Vector& psi);
/// ‖(O_A − A)ψ‖, valid for projective models only (throws otherwise).
double rms_error_projective(const MeasurementModel& model, const Matrix& a, const Vector& psi);

/// η(B) from post-measurement moment operators: ⟨O_B⁽²⁾ − O_B⁽¹⁾B − BO_B⁽¹⁾ + B²⟩.
double rms_disturbance(const MeasurementModel& model, const Matrix& b, const Vector& psi);
/// η(B)² = Σ ‖[M_m, B]ψ‖²
double rms_disturbance_sum_form(const MeasurementModel& model, const Matrix& b, const Vector& psi);

/// Square root of a quantity that is a norm squared analytically. Values in
/// [−1e-10, 0) are clamped to 0, anything lower throws InconsistentData.
double checked_sqrt(double radicand, const char* what);

/// Left and right sides of the Heisenberg-form, Ozawa, combined and
/// Robertson/Schrödinger relations for a single configuration.
struct UncertaintyReport {
    double eps = 0.0;
    double eta = 0.0;
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    /// ½|⟨[A,B]⟩|; lower bound of σ_Aσ_B. Same value as commutator_bound.
    double robertson_bound = 0.0;
    /// √(anticommutator_term² + commutator_bound²)
    double schroedinger_bound = 0.0;
    /// ½⟨{A−⟨A⟩, B−⟨B⟩}⟩
    double anticommutator_term = 0.0;
    /// ½|⟨[A,B]⟩|; right side of the error-disturbance relations.
    double commutator_bound = 0.0;
    double heisenberg_lhs = 0.0;
    double ozawa_lhs = 0.0;
    double combined_lhs = 0.0;
    bool heisenberg_ok = false;
    bool ozawa_ok = false;
    bool combined_ok = false;
};

/// Slack allowed when evaluating the relation flags.
inline constexpr double relation_slack = 1e-9;

/// Fills the derived fields (lhs values and flags) from ε, η, σ_A, σ_B and the bounds.
UncertaintyReport make_report(double eps, double eta, double sigma_a, double sigma_b,
                              double commutator_bound, double anticommutator_term);

UncertaintyReport evaluate_relations(const MeasurementModel& model, const Matrix& a, const Matrix& b,
                                     const Vector& psi);

/// √(⟨X²⟩ − ⟨X⟩²)
double standard_deviation(const Matrix& observable, const Vector& psi);

/// Re⟨ψ|X|ψ⟩; rejects imaginary parts above 1e-10.
double expectation(const Matrix& observable, const Vector& psi);

}  // namespace spinmeas
