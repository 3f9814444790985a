// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "spinmeas/beamline.hpp"
#include "spinmeas/povm.hpp"
#include "spinmeas/random_models.hpp"
#include "spinmeas/spin.hpp"
#include "spinmeas/sweep.hpp"
#include "spinmeas/threestate.hpp"

using namespace spinmeas;
using std::numbers::pi;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;  // 0 means no limit
    std::function<Verdict()> run;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double eps_from_three_states(const UnitAxis& a, const SpinState& psi, const UnitAxis& o) {
    const auto set = threestate::auxiliary_states(spin_observable(a.vec()), psi);
    return threestate::estimate_error(threestate::exact_expectations(spin_observable(o.vec()), set),
                                      threestate::NormsSquared::of(set));
}

double eta_from_three_states(const UnitAxis& b, const SpinState& psi, const UnitAxis& o) {
    const auto set = threestate::auxiliary_states(spin_observable(b.vec()), psi);
    return threestate::estimate_disturbance(threestate::exact_expectations(spin::modified_observable(b, o), set),
                                            threestate::NormsSquared::of(set));
}

Verdict oracle_equivalence() {
    Rng rng = derived_rng(2024, 1);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const UnitAxis a = random_axis(rng);
        const UnitAxis o = random_axis(rng);
        const UnitAxis b = random_axis(rng);
        const Vector psi = random_spin_state(rng).amplitudes();
        const MeasurementModel m = spin::projective_apparatus(o);
        const Matrix am = spin_observable(a.vec());
        const Matrix bm = spin_observable(b.vec());
        const double e[3] = {rms_error(m, am, psi), rms_error_sum_form(m, am, psi), spin::error_exact(a, o)};
        const double d[3] = {rms_disturbance(m, bm, psi), rms_disturbance_sum_form(m, bm, psi),
                             spin::disturbance_exact(b, o)};
        for (int x = 0; x < 3; ++x) {
            for (int y = x + 1; y < 3; ++y) {
                worst = std::max({worst, std::abs(e[x] - e[y]), std::abs(d[x] - d[y])});
            }
        }
    }
    return {worst <= 1e-12, "max pairwise deviation " + fmt("%.3g", worst) + " over 10000 configurations"};
}

Verdict three_state_identity() {
    double worst_standard = 0.0;
    double worst_all = 0.0;
    for (const auto& name : sweep::preset_names()) {
        const auto cfg = sweep::preset(name);
        const auto a_set = threestate::auxiliary_states(spin_observable(cfg.a.vec()), cfg.psi);
        const auto b_set = threestate::auxiliary_states(spin_observable(cfg.b.vec()), cfg.psi);
        const auto a_norms = threestate::NormsSquared::of(a_set);
        const auto b_norms = threestate::NormsSquared::of(b_set);
        for (int i = 0; i < 181; ++i) {
            for (int j = 0; j < 361; ++j) {
                const UnitAxis o = UnitAxis::from_angles(pi * i / 180.0, 2.0 * pi * j / 360.0);
                const double e = threestate::estimate_error(
                    threestate::exact_expectations(spin_observable(o.vec()), a_set), a_norms);
                const double h = threestate::estimate_disturbance(
                    threestate::exact_expectations(spin::modified_observable(cfg.b, o), b_set), b_norms);
                const double dev = std::max(std::abs(e - spin::error_exact(cfg.a, o)),
                                            std::abs(h - spin::disturbance_exact(cfg.b, o)));
                worst_all = std::max(worst_all, dev);
                if (name == "standard") worst_standard = std::max(worst_standard, dev);
            }
        }
    }
    return {worst_standard <= 1e-12 && worst_all <= 1e-12,
            "181x361 grid: standard " + fmt("%.3g", worst_standard) + ", all presets " + fmt("%.3g", worst_all)};
}

Verdict ozawa_validity() {
    double worst_grid = std::numeric_limits<double>::infinity();
    for (const auto& name : sweep::preset_names()) {
        const auto cfg = sweep::preset(name);
        const UnitAxis r = cfg.psi.direction();
        for (int i = 0; i < 181; ++i) {
            for (int j = 0; j < 361; ++j) {
                const UnitAxis o = UnitAxis::from_angles(pi * i / 180.0, 2.0 * pi * j / 360.0);
                const auto rep = spin::report({cfg.a, cfg.b, r, o});
                worst_grid = std::min(worst_grid, rep.ozawa_lhs - rep.commutator_bound);
            }
        }
    }
    Rng rng = derived_rng(2024, 3);
    double worst_models = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const int ds = 2 + k % 2;
        const int dp = 2 + (k / 2) % 2;
        const MeasurementModel m = from_indirect(random_indirect_model(ds, dp, rng));
        const auto rep = evaluate_relations(m, random_hermitian(ds, rng), random_hermitian(ds, rng),
                                            random_state(ds, rng));
        worst_models = std::min(worst_models, rep.ozawa_lhs - rep.commutator_bound);
    }
    return {worst_grid >= -1e-9 && worst_models >= -1e-9,
            "min margin: grid " + fmt("%.6g", worst_grid) + ", 1000 indirect models " + fmt("%.6g", worst_models)};
}

Verdict heisenberg_violation() {
    const auto cfg = sweep::preset("standard");
    const UnitAxis o = UnitAxis::from_angles(pi / 2.0, pi / 6.0);
    const auto rep = evaluate_relations(spin::projective_apparatus(o), spin_observable(cfg.a.vec()),
                                        spin_observable(cfg.b.vec()), cfg.psi.amplitudes());
    // ε = 2 sin(φ/2), η = √2 |cos φ| at φ = π/6.
    const double expected = 2.0 * std::sin(pi / 12.0) * std::sqrt(2.0) * std::cos(pi / 6.0);
    const bool values_ok = std::abs(rep.heisenberg_lhs - expected) <= 1e-9 &&
                           std::abs(rep.heisenberg_lhs - 0.634) < 5e-4 &&
                           std::abs(rep.commutator_bound - 1.0) <= 1e-9 && rep.heisenberg_lhs < rep.commutator_bound;

    const auto v = sweep::violation_analysis(cfg.a, cfg.b, cfg.psi, pi / 2.0);
    auto covers = [&](double phi) {
        for (const auto& [lo, hi] : v.violated_intervals) {
            if (lo <= phi - 0.05 && phi + 0.05 <= hi) return true;
            if (phi == 0.0 && lo == 0.0 && hi >= 0.05) return true;
        }
        return false;
    };
    const bool regions_ok = covers(0.0) && covers(pi / 2.0) && covers(3.0 * pi / 2.0);
    return {values_ok && regions_ok, "eps*eta = " + fmt("%.12f", rep.heisenberg_lhs) + " (expected " +
                                         fmt("%.12f", expected) + "), " +
                                         std::to_string(v.violated_intervals.size()) + " violated intervals"};
}

Verdict violation_threshold() {
    const auto cfg = sweep::preset("standard");
    const double t = rad_to_deg(sweep::violation_threshold(cfg.a, cfg.b, cfg.psi));
    const double target = rad_to_deg(std::asin(0.75));
    return {std::abs(t - target) <= 0.01, "threshold " + fmt("%.6f", t) + " deg, arcsin(0.75) = " +
                                              fmt("%.6f", target) + " deg"};
}

Verdict standard_ports() {
    const auto p = beamline::port_probabilities(SpinState::plus_z(), UnitAxis::x(), UnitAxis::y());
    double worst = 0.0;
    for (double v : p.as_array()) worst = std::max(worst, std::abs(v - 0.25));
    const auto e = beamline::expectations_from_probabilities(p);
    beamline::CountRecord rec;
    rec.counts = {1000, 1000, 1000, 1000};
    const auto c = beamline::expectations_from_counts(rec, beamline::ImperfectionModel{});
    const bool ok = worst <= 1e-12 && std::abs(e.o_a) <= 1e-12 && std::abs(e.o_b) <= 1e-12 && c.o_a == 0.0 &&
                    c.o_b == 0.0;
    return {ok, "max |p - 1/4| = " + fmt("%.3g", worst) + ", <O_A> = " + fmt("%.3g", e.o_a) +
                    ", <O_B> = " + fmt("%.3g", e.o_b)};
}

Verdict monte_carlo_consistency() {
    const auto cfg = sweep::preset("standard");
    std::string detail;
    bool ok = true;
    for (double phi : {0.0, pi / 4.0, pi / 2.0}) {
        const UnitAxis o = UnitAxis::from_angles(pi / 2.0, phi);
        const double eps0 = 2.0 * std::abs(std::sin(phi / 2.0));
        const double eta0 = std::sqrt(2.0) * std::abs(std::cos(phi));
        int within = 0;
        for (int experiment = 0; experiment < 100; ++experiment) {
            beamline::ImperfectionModel imp;  // efficiency 0.96, jitter 1.5 deg
            imp.rng_seed = 1000 + static_cast<std::uint64_t>(experiment);
            const auto est = beamline::run_with_error_bars({cfg.a, cfg.b, o, cfg.psi}, 100, imp,
                                                           beamline::CountingSetup::with_counts(4000.0));
            if (std::abs(est.eps.mean - eps0) <= 3.0 * est.eps.sd && std::abs(est.eta.mean - eta0) <= 3.0 * est.eta.sd) {
                ++within;
            }
        }
        ok = ok && within >= 95;
        detail += (detail.empty() ? "" : ", ") + std::string("phi=") + fmt("%.4f", phi) + ": " +
                  std::to_string(within) + "/100";
    }
    return {ok, detail};
}

Verdict bound_hierarchy() {
    Rng rng = derived_rng(2024, 8);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10000; ++i) {
        const UnitAxis o = random_axis(rng);
        const Matrix a = spin_observable(random_axis(rng).vec());
        const Matrix b = spin_observable(random_axis(rng).vec());
        const auto r = evaluate_relations(spin::projective_apparatus(o), a, b, random_spin_state(rng).amplitudes());
        worst = std::min({worst, r.sigma_a * r.sigma_b - r.schroedinger_bound,
                          r.schroedinger_bound - r.robertson_bound,
                          r.combined_lhs - std::max(r.ozawa_lhs, r.commutator_bound)});
    }
    return {worst >= -1e-12, "min slack " + fmt("%.3g", worst) + " over 10000 configurations"};
}

Verdict state_independence() {
    const auto cfg = sweep::preset("standard");
    const UnitAxis o = UnitAxis::from_angles(1.1, 0.4);
    Rng rng = derived_rng(2024, 9);
    double e_lo = 1e9, e_hi = -1e9, h_lo = 1e9, h_hi = -1e9, oz_lo = 1e9, oz_hi = -1e9;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const SpinState psi = random_spin_state(rng);
        const auto exact = evaluate_relations(spin::projective_apparatus(o), spin_observable(cfg.a.vec()),
                                              spin_observable(cfg.b.vec()), psi.amplitudes());
        for (double e : {exact.eps, eps_from_three_states(cfg.a, psi, o)}) {
            e_lo = std::min(e_lo, e);
            e_hi = std::max(e_hi, e);
        }
        for (double h : {exact.eta, eta_from_three_states(cfg.b, psi, o)}) {
            h_lo = std::min(h_lo, h);
            h_hi = std::max(h_hi, h);
        }
        oz_lo = std::min(oz_lo, exact.ozawa_lhs);
        oz_hi = std::max(oz_hi, exact.ozawa_lhs);
        worst_margin = std::min(worst_margin, exact.ozawa_lhs - exact.commutator_bound);
    }
    const bool ok = e_hi - e_lo < 1e-12 && h_hi - h_lo < 1e-12 && oz_hi - oz_lo > 1e-3 && worst_margin >= -1e-9;
    return {ok, "spread eps " + fmt("%.3g", e_hi - e_lo) + ", eta " + fmt("%.3g", h_hi - h_lo) + "; ozawa range " +
                    fmt("%.4f", oz_lo) + ".." + fmt("%.4f", oz_hi) + ", min margin " + fmt("%.4g", worst_margin)};
}

Verdict ozawa_touching() {
    const auto cfg = sweep::preset("phiB", 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : sweep::run_scenario(cfg)) best = std::min(best, r.exact.ozawa_lhs - r.exact.commutator_bound);
    return {std::abs(best) <= 1e-9, "min(ozawa_lhs - bound) = " + fmt("%.3g", best)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "closed-form oracle equivalence", 10.0, oracle_equivalence},
        {2, "three-state identity", 30.0, three_state_identity},
        {3, "Ozawa universal validity", 60.0, ozawa_validity},
        {4, "Heisenberg violation, standard configuration", 0.0, heisenberg_violation},
        {5, "violation threshold", 10.0, violation_threshold},
        {6, "standard-configuration ports", 0.0, standard_ports},
        {7, "Monte Carlo statistical consistency", 60.0, monte_carlo_consistency},
        {8, "bound hierarchy and Schroedinger refinement", 0.0, bound_hierarchy},
        {9, "state independence", 0.0, state_independence},
        {10, "Ozawa-touching degeneracy", 0.0, ozawa_touching},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.time_limit_s <= 0.0 || secs < c.time_limit_s;
        const bool pass = out.ok && in_time;
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %2d: %s | %s | %.2fs%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    out.detail.c_str(), secs,
                    c.time_limit_s > 0.0 ? (in_time ? " (within limit)" : " (over time limit)") : "");
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
