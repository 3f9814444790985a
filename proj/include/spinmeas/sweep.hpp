#pragma once

// Scenario engine: parameterized paths of the apparatus axis o_a, theory
// curves, exact / three-state / Monte Carlo reports, Bloch-sphere scans and the
// analysis of where the Heisenberg-form relation fails.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinmeas/beamline.hpp"
#include "spinmeas/povm.hpp"
#include "spinmeas/qmcore.hpp"

namespace spinmeas::sweep {

/// Scenario family, selects the printed theory curve for ε and η.
enum class Family { standard, latitude, phi_b, theta_b, psi, custom };

enum class PathKind { equator, latitude, custom };

struct OaPath {
    PathKind kind = PathKind::equator;
    double theta_oa = std::numbers::pi / 2.0;  ///< polar angle for latitude paths
    double phi_start = 0.0;
    double phi_end = 2.0 * std::numbers::pi;
    std::vector<UnitAxis> axes;  ///< custom paths only
};

enum class Mode { exact, three_state_exact, monte_carlo };

struct ScenarioConfig {
    std::string name = "custom";
    Family family = Family::custom;
    double family_parameter = 0.0;  ///< φ_B, θ_B, or unused
    UnitAxis a = UnitAxis::x();
    UnitAxis b = UnitAxis::y();
    SpinState psi = SpinState::plus_z();
    OaPath path;
    int samples = 361;
    Mode mode = Mode::exact;
    int replicates = 100;
    double counts_per_setting = 4000.0;
    beamline::ImperfectionModel imperfections;
    unsigned threads = 1;

    /// Throws InvalidInput for samples < 2, an empty custom path, etc.
    void validate() const;
};

/// Names accepted by preset().
std::vector<std::string> preset_names();

/// standard: A=σ_x, B=σ_y, ψ=|+z⟩, equator.
/// latitude: standard observables, θ_OA = π/3 (or `parameter`).
/// phiB: B = cos φ_B σ_x + sin φ_B σ_y, φ_B = π/3 by default.
/// thetaB: B = sin θ_B σ_y + cos θ_B σ_z, θ_B = π/4 by default, equator.
/// thetaB-lat60: thetaB observables with θ_OA = π/3.
/// thetaB-latB: thetaB observables with θ_OA = θ_B.
/// psi: ψ(θ_ψ = π/4, φ_ψ = π/12), or θ_ψ = parameter.
ScenarioConfig preset(std::string_view name, std::optional<double> parameter = std::nullopt);

struct SweepRow {
    double phi_oa = 0.0;
    double theta_oa = 0.0;
    UnitAxis o_a = UnitAxis::x();
    UncertaintyReport exact;
    double eps_theory = 0.0;
    double eta_theory = 0.0;
    beamline::PortProbabilities ports;  ///< exact ports for input ψ
    std::optional<beamline::MonteCarloEstimate> estimate;
};

/// Sample points (θ_OA, φ_OA, axis) along the configured path.
struct PathSample {
    double theta;
    double phi;
    UnitAxis axis;
};
std::vector<PathSample> path_samples(const ScenarioConfig& config);

/// ε, η from the scenario family's printed closed form.
std::pair<double, double> theory_curves(const ScenarioConfig& config, double theta_oa, double phi_oa,
                                        const UnitAxis& o_a);

/// One row per path sample, ordered by sample index.
std::vector<SweepRow> run_scenario(const ScenarioConfig& config);

enum class Quantity { error, disturbance, product, ozawa_sum };

std::optional<Quantity> parse_quantity(std::string_view name);
std::string_view to_string(Quantity q);

/// Values on a (θ, φ) grid, θ ∈ [0, π] and φ ∈ [0, 2π] both inclusive,
/// stored θ-major.
struct BlochGrid {
    Quantity quantity = Quantity::error;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> thetas;
    std::vector<double> phis;
    std::vector<double> values;

    double at(int i_theta, int i_phi) const { return values[static_cast<std::size_t>(i_theta * n_phi + i_phi)]; }
};

BlochGrid bloch_scan(Quantity quantity, const UnitAxis& a, const UnitAxis& b, const SpinState& psi, int n_theta,
                     int n_phi);

struct ViolationAnalysis {
    double min_margin = 0.0;  ///< min over φ_OA of ε·η − bound, refined locally
    double argmin_phi = 0.0;
    bool fulfilled_everywhere = true;
    /// Closed φ ranges of grid points where ε·η < bound.
    std::vector<std::pair<double, double>> violated_intervals;
};

ViolationAnalysis violation_analysis(const UnitAxis& a, const UnitAxis& b, const SpinState& psi, double theta_oa,
                                     int resolution = 3601);

/// Largest θ_OA ∈ [0, π/2] for which ε·η ≥ bound on the whole circle of
/// latitude, found by bisection to `tolerance` radians.
double violation_threshold(const UnitAxis& a, const UnitAxis& b, const SpinState& psi, double tolerance = 1e-6);

}  // namespace spinmeas::sweep
