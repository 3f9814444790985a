#pragma once

// Two-apparatus neutron spin experiment: four-port probabilities of the
// sequential O_A / B measurement, Poisson counting, efficiency normalization,
// Larmor-angle jitter and Monte Carlo reconstruction of ε, η, σ(A), σ(B).

#include <array>
#include <cstdint>

#include "spinmeas/qmcore.hpp"
#include "spinmeas/random_models.hpp"

namespace spinmeas::beamline {

/// Probabilities of the output ports (++), (+−), (−+), (−−); the first sign is
/// the O_A outcome, the second the B outcome.
struct PortProbabilities {
    double pp = 0.0;
    double pm = 0.0;
    double mp = 0.0;
    double mm = 0.0;

    double sum() const { return pp + pm + mp + mm; }
    std::array<double, 4> as_array() const { return {pp, pm, mp, mm}; }
};

struct CountRecord {
    std::array<std::uint64_t, 4> counts{};  ///< ++, +−, −+, −−
    double exposure = 0.0;                  ///< seconds per port setting
    double mean_rate = 0.0;                 ///< counts/second for a port of probability 1

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

struct ImperfectionModel {
    double efficiency = 0.96;
    double angle_jitter_sigma = deg_to_rad(1.5);  ///< radians, per rotation angle
    std::uint64_t rng_seed = 0;

    static ImperfectionModel ideal() { return {1.0, 0.0, 0}; }
    /// Throws InvalidInput unless efficiency ∈ (0, 1] and jitter ≥ 0.
    void validate() const;
};

/// Counting exposure per port setting. A non-finite mean_rate means the
/// infinite-statistics limit: expectations come straight from probabilities.
struct CountingSetup {
    double exposure = 600.0;
    double mean_rate = 4000.0 / 600.0;

    double expected_counts() const { return exposure * mean_rate; }
    bool noiseless() const;
    static CountingSetup with_counts(double counts_per_setting) { return {600.0, counts_per_setting / 600.0}; }
};

/// p_mn = ‖Π^B_n Π^{O_A}_m ψ‖²
PortProbabilities port_probabilities(const SpinState& psi, const UnitAxis& o_a, const UnitAxis& b);

/// Reduced analyzer efficiency as a visibility v on every expectation value:
/// p' = v p + (1 − v)/4.
PortProbabilities with_visibility(const PortProbabilities& p, double efficiency);

/// Independent Poisson counts per port with mean exposure·mean_rate·p'.
CountRecord simulate_counts(const PortProbabilities& probs, double exposure, double mean_rate,
                            const ImperfectionModel& imperfections, Rng& rng);

struct PortExpectations {
    double o_a = 0.0;
    double o_b = 0.0;
};

/// ⟨O_A⟩ = ((I₊₊+I₊₋) − (I₋₊+I₋₋))/ΣI and ⟨O_B⟩ = ((I₊₊+I₋₊) − (I₊₋+I₋₋))/ΣI,
/// divided by the efficiency and clamped to [−1, 1].
PortExpectations expectations_from_counts(const CountRecord& counts, const ImperfectionModel& imperfections);

/// The same reductions applied to probabilities instead of counts (no
/// efficiency correction).
PortExpectations expectations_from_probabilities(const PortProbabilities& p);

/// Which apparatus performs a single-stage measurement: A1 alone with DC-3/DC-4
/// off (used for σ(A)) or A2 alone with A1 removed (used for σ(B)). Both are
/// ideal single projective stages in this model.
enum class Apparatus { A1, A2 };

/// ⟨axis·σ⟩_ψ from one projective stage, (p₊ − p₋).
double single_axis_expectation(const SpinState& psi, const UnitAxis& axis, Apparatus which);

struct TwoPortCounts {
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;
};

TwoPortCounts simulate_single_axis(const SpinState& psi, const UnitAxis& axis, const CountingSetup& counting,
                                   const ImperfectionModel& imperfections, Rng& rng);

/// (I₊ − I₋)/(I₊ + I₋), efficiency-corrected and clamped.
double expectation_from_single_axis(const TwoPortCounts& counts, const ImperfectionModel& imperfections);

/// State prepared from |+z⟩ by a flipper rotation about x (polar angle) and
/// guide-field precession about z (azimuth).
SpinState prepare_direction(double theta, double phi);

/// Axis with Gaussian noise added to its polar and azimuthal angles.
UnitAxis jitter_axis(const UnitAxis& axis, double sigma, Rng& rng);

/// The state re-prepared with Gaussian noise on both rotation angles.
SpinState jitter_state(const SpinState& psi, double sigma, Rng& rng);

struct ScenarioPoint {
    UnitAxis a;
    UnitAxis b;
    UnitAxis o_a;
    SpinState psi;
};

struct Estimate {
    double mean = 0.0;
    double sd = 0.0;
};

struct MonteCarloEstimate {
    Estimate eps;
    Estimate eta;
    Estimate sigma_a;
    Estimate sigma_b;
    int replicates = 0;
    /// Replicates whose squared estimate fell below −1e-10; they enter the
    /// statistics with the value 0.
    int eps_radicand_failures = 0;
    int eta_radicand_failures = 0;
};

/// Full pipeline per replicate: preparation of ψ, Aψ, (A+1)ψ, Bψ, (B+1)ψ,
/// the two-stage port measurement, counting, reduction and three-state
/// reconstruction. Replicate i uses derived_rng(imperfections.rng_seed, stream, i).
MonteCarloEstimate run_with_error_bars(const ScenarioPoint& point, int replicates,
                                       const ImperfectionModel& imperfections, const CountingSetup& counting,
                                       std::uint64_t stream = 0);

}  // namespace spinmeas::beamline
