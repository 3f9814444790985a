#include "spinmeas/beamline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "spinmeas/errors.hpp"
#include "spinmeas/spin.hpp"
#include "spinmeas/threestate.hpp"

namespace spinmeas::beamline {

namespace {

std::uint64_t poisson(double mean, Rng& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(rng);
}

double corrected(double raw, double efficiency) { return std::clamp(raw / efficiency, -1.0, 1.0); }

Estimate summarize(const std::vector<double>& values) {
    Estimate e;
    const double n = static_cast<double>(values.size());
    for (double v : values) e.mean += v;
    e.mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return e;
}

// One input state through A1 (o_a) and A2 (b), reduced to ⟨O_A⟩, ⟨O_B⟩.
PortExpectations measure_ports(const SpinState& input, const UnitAxis& o_a, const UnitAxis& b,
                               const ImperfectionModel& imp, const CountingSetup& counting, Rng& rng) {
    const SpinState prepared = jitter_state(input, imp.angle_jitter_sigma, rng);
    const UnitAxis o_a_real = jitter_axis(o_a, imp.angle_jitter_sigma, rng);
    const UnitAxis b_real = jitter_axis(b, imp.angle_jitter_sigma, rng);
    const PortProbabilities p = port_probabilities(prepared, o_a_real, b_real);
    if (counting.noiseless()) {
        const PortExpectations raw = expectations_from_probabilities(with_visibility(p, imp.efficiency));
        return {corrected(raw.o_a, imp.efficiency), corrected(raw.o_b, imp.efficiency)};
    }
    return expectations_from_counts(simulate_counts(p, counting.exposure, counting.mean_rate, imp, rng), imp);
}

double measure_single(const SpinState& input, const UnitAxis& axis, const ImperfectionModel& imp,
                      const CountingSetup& counting, Rng& rng) {
    const SpinState prepared = jitter_state(input, imp.angle_jitter_sigma, rng);
    const UnitAxis axis_real = jitter_axis(axis, imp.angle_jitter_sigma, rng);
    if (counting.noiseless()) {
        return corrected(imp.efficiency * single_axis_expectation(prepared, axis_real, Apparatus::A1),
                         imp.efficiency);
    }
    return expectation_from_single_axis(simulate_single_axis(prepared, axis_real, counting, imp, rng), imp);
}

}  // namespace

void ImperfectionModel::validate() const {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw InvalidInput("efficiency must lie in (0, 1]");
    if (!(angle_jitter_sigma >= 0.0) || !std::isfinite(angle_jitter_sigma)) {
        throw InvalidInput("angle jitter must be a finite non-negative angle");
    }
}

bool CountingSetup::noiseless() const { return !std::isfinite(mean_rate); }

PortProbabilities port_probabilities(const SpinState& psi, const UnitAxis& o_a, const UnitAxis& b) {
    const SpinOperator first = spin_operator(o_a);
    const SpinOperator second = spin_operator(b);
    const Ket2 plus = first.projector_plus * psi.amplitudes();
    const Ket2 minus = first.projector_minus * psi.amplitudes();
    return {(second.projector_plus * plus).squaredNorm(), (second.projector_minus * plus).squaredNorm(),
            (second.projector_plus * minus).squaredNorm(), (second.projector_minus * minus).squaredNorm()};
}

PortProbabilities with_visibility(const PortProbabilities& p, double efficiency) {
    const double floor = 0.25 * (1.0 - efficiency);
    return {efficiency * p.pp + floor, efficiency * p.pm + floor, efficiency * p.mp + floor,
            efficiency * p.mm + floor};
}

CountRecord simulate_counts(const PortProbabilities& probs, double exposure, double mean_rate,
                            const ImperfectionModel& imperfections, Rng& rng) {
    if (!(exposure > 0.0) || !(mean_rate > 0.0)) throw InvalidInput("exposure and mean rate must be positive");
    imperfections.validate();
    const PortProbabilities seen = with_visibility(probs, imperfections.efficiency);
    const double scale = exposure * mean_rate;
    CountRecord rec;
    rec.exposure = exposure;
    rec.mean_rate = mean_rate;
    const auto p = seen.as_array();
    for (std::size_t i = 0; i < 4; ++i) rec.counts[i] = poisson(scale * p[i], rng);
    return rec;
}

PortExpectations expectations_from_counts(const CountRecord& counts, const ImperfectionModel& imperfections) {
    const std::uint64_t total = counts.total();
    if (total == 0) throw InvalidInput("no counts recorded in any port");
    const auto& c = counts.counts;
    const double n = static_cast<double>(total);
    const double o_a = ((static_cast<double>(c[0]) + static_cast<double>(c[1])) -
                        (static_cast<double>(c[2]) + static_cast<double>(c[3]))) / n;
    const double o_b = ((static_cast<double>(c[0]) + static_cast<double>(c[2])) -
                        (static_cast<double>(c[1]) + static_cast<double>(c[3]))) / n;
    return {corrected(o_a, imperfections.efficiency), corrected(o_b, imperfections.efficiency)};
}

PortExpectations expectations_from_probabilities(const PortProbabilities& p) {
    const double total = p.sum();
    return {((p.pp + p.pm) - (p.mp + p.mm)) / total, ((p.pp + p.mp) - (p.pm + p.mm)) / total};
}

double single_axis_expectation(const SpinState& psi, const UnitAxis& axis, Apparatus /*which*/) {
    const SpinOperator op = spin_operator(axis);
    const double plus = (op.projector_plus * psi.amplitudes()).squaredNorm();
    const double minus = (op.projector_minus * psi.amplitudes()).squaredNorm();
    return plus - minus;
}

TwoPortCounts simulate_single_axis(const SpinState& psi, const UnitAxis& axis, const CountingSetup& counting,
                                   const ImperfectionModel& imperfections, Rng& rng) {
    imperfections.validate();
    const double e = imperfections.efficiency * single_axis_expectation(psi, axis, Apparatus::A1);
    const double n = counting.expected_counts();
    return {poisson(n * 0.5 * (1.0 + e), rng), poisson(n * 0.5 * (1.0 - e), rng)};
}

double expectation_from_single_axis(const TwoPortCounts& counts, const ImperfectionModel& imperfections) {
    const std::uint64_t total = counts.plus + counts.minus;
    if (total == 0) throw InvalidInput("no counts recorded in either port");
    const double raw = (static_cast<double>(counts.plus) - static_cast<double>(counts.minus)) /
                       static_cast<double>(total);
    return corrected(raw, imperfections.efficiency);
}

SpinState prepare_direction(double theta, double phi) {
    // exp(iα n·σ) turns the Bloch vector by −2α about n.
    const SpinState tilted = rotate(UnitAxis::x(), theta / 2.0, SpinState::plus_z());
    return rotate(UnitAxis::z(), (std::numbers::pi / 2.0 - phi) / 2.0, tilted);
}

UnitAxis jitter_axis(const UnitAxis& axis, double sigma, Rng& rng) {
    if (sigma <= 0.0) return axis;
    std::normal_distribution<double> n(0.0, sigma);
    const double d_theta = n(rng);
    const double d_phi = n(rng);
    return UnitAxis::from_angles(axis.polar() + d_theta, axis.azimuth() + d_phi);
}

SpinState jitter_state(const SpinState& psi, double sigma, Rng& rng) {
    if (sigma <= 0.0) return psi;
    const UnitAxis dir = psi.direction();
    std::normal_distribution<double> n(0.0, sigma);
    const double d_theta = n(rng);
    const double d_phi = n(rng);
    return prepare_direction(dir.polar() + d_theta, dir.azimuth() + d_phi);
}

MonteCarloEstimate run_with_error_bars(const ScenarioPoint& point, int replicates,
                                       const ImperfectionModel& imperfections, const CountingSetup& counting,
                                       std::uint64_t stream) {
    if (replicates < 2) throw InvalidInput("at least two replicates are required");
    imperfections.validate();
    if (!counting.noiseless() && !(counting.expected_counts() > 0.0)) {
        throw InvalidInput("expected counts per setting must be positive");
    }

    const Operator2 a_op = spin_observable(point.a.vec());
    const Operator2 b_op = spin_observable(point.b.vec());
    const threestate::ThreeStateSet a_set = threestate::auxiliary_states(a_op, point.psi);
    const threestate::ThreeStateSet b_set = threestate::auxiliary_states(b_op, point.psi);
    const auto a_norms = threestate::NormsSquared::of(a_set);
    const auto b_norms = threestate::NormsSquared::of(b_set);

    MonteCarloEstimate out;
    out.replicates = replicates;
    std::vector<double> eps, eta, sig_a, sig_b;
    eps.reserve(replicates);
    eta.reserve(replicates);
    sig_a.reserve(replicates);
    sig_b.reserve(replicates);

    for (int rep = 0; rep < replicates; ++rep) {
        Rng rng = derived_rng(imperfections.rng_seed, stream, static_cast<std::uint64_t>(rep));
        auto ports = [&](const std::optional<SpinState>& s) {
            return s ? measure_ports(*s, point.o_a, point.b, imperfections, counting, rng) : PortExpectations{};
        };
        const PortExpectations base = ports(point.psi);
        const PortExpectations a_t = ports(a_set.transformed.state);
        const PortExpectations a_s = ports(a_set.shifted.state);
        const PortExpectations b_t = ports(b_set.transformed.state);
        const PortExpectations b_s = ports(b_set.shifted.state);

        try {
            eps.push_back(threestate::estimate_error({base.o_a, a_t.o_a, a_s.o_a}, a_norms));
        } catch (const InconsistentData&) {
            ++out.eps_radicand_failures;
            eps.push_back(0.0);
        }
        try {
            eta.push_back(threestate::estimate_disturbance({base.o_b, b_t.o_b, b_s.o_b}, b_norms));
        } catch (const InconsistentData&) {
            ++out.eta_radicand_failures;
            eta.push_back(0.0);
        }

        const double mean_a = measure_single(point.psi, point.a, imperfections, counting, rng);
        const double mean_b = measure_single(point.psi, point.b, imperfections, counting, rng);
        sig_a.push_back(std::sqrt(std::max(0.0, 1.0 - mean_a * mean_a)));
        sig_b.push_back(std::sqrt(std::max(0.0, 1.0 - mean_b * mean_b)));
    }

    out.eps = summarize(eps);
    out.eta = summarize(eta);
    out.sigma_a = summarize(sig_a);
    out.sigma_b = summarize(sig_b);
    return out;
}

}  // namespace spinmeas::beamline
