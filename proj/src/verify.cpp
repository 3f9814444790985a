#include "spinmeas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinmeas/povm.hpp"
#include "spinmeas/random_models.hpp"
#include "spinmeas/spin.hpp"
#include "spinmeas/sweep.hpp"
#include "spinmeas/threestate.hpp"

namespace spinmeas::verify {

namespace {

Vector as_vector(const SpinState& s) { return s.amplitudes(); }

SuiteResult finish(std::string name, double worst, double limit, bool lower_is_better, std::string detail = {}) {
    SuiteResult r;
    r.name = std::move(name);
    r.worst = worst;
    r.limit = limit;
    r.passed = lower_is_better ? worst <= limit : worst >= limit;
    r.detail = std::move(detail);
    return r;
}

}  // namespace

SuiteResult oracle_equivalence(const Options& opt) {
    Rng rng = derived_rng(opt.seed, 1);
    double worst = 0.0;
    for (int i = 0; i < opt.random_configs; ++i) {
        const UnitAxis a = random_axis(rng);
        const UnitAxis b = random_axis(rng);
        const UnitAxis o = random_axis(rng);
        const Vector psi = as_vector(random_spin_state(rng));
        const MeasurementModel model = spin::projective_apparatus(o);
        const Matrix am = spin_observable(a.vec());
        const Matrix bm = spin_observable(b.vec());

        const double e1 = rms_error(model, am, psi);
        const double e2 = rms_error_sum_form(model, am, psi);
        const double e3 = spin::error_exact(a, o);
        const double d1 = rms_disturbance(model, bm, psi);
        const double d2 = rms_disturbance_sum_form(model, bm, psi);
        const double d3 = spin::disturbance_exact(b, o);
        worst = std::max({worst, std::abs(e1 - e2), std::abs(e1 - e3), std::abs(e2 - e3), std::abs(d1 - d2),
                          std::abs(d1 - d3), std::abs(d2 - d3)});
    }
    return finish("oracle-equivalence", worst, 1e-12, true);
}

SuiteResult three_state_identity(const Options& opt) {
    double worst = 0.0;
    std::string where;
    for (const auto& name : sweep::preset_names()) {
        const sweep::ScenarioConfig cfg = sweep::preset(name);
        const auto a_set = threestate::auxiliary_states(spin_observable(cfg.a.vec()), cfg.psi);
        const auto b_set = threestate::auxiliary_states(spin_observable(cfg.b.vec()), cfg.psi);
        const auto a_norms = threestate::NormsSquared::of(a_set);
        const auto b_norms = threestate::NormsSquared::of(b_set);
        const auto grid = sweep::bloch_scan(sweep::Quantity::error, cfg.a, cfg.b, cfg.psi, opt.grid_theta, opt.grid_phi);
        for (double theta : grid.thetas) {
            for (double phi : grid.phis) {
                const UnitAxis o = UnitAxis::from_angles(theta, phi);
                const double eps = threestate::estimate_error(
                    threestate::exact_expectations(spin_observable(o.vec()), a_set), a_norms);
                const double eta = threestate::estimate_disturbance(
                    threestate::exact_expectations(spin::modified_observable(cfg.b, o), b_set), b_norms);
                const double dev = std::max(std::abs(eps - spin::error_exact(cfg.a, o)),
                                            std::abs(eta - spin::disturbance_exact(cfg.b, o)));
                if (dev > worst) {
                    worst = dev;
                    where = name;
                }
            }
        }
    }
    return finish("three-state-identity", worst, 1e-12, true, where.empty() ? "" : "worst preset: " + where);
}

SuiteResult ozawa_grid(const Options& opt) {
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    for (const auto& name : sweep::preset_names()) {
        const auto cfg = sweep::preset(name);
        const UnitAxis r = cfg.psi.direction();
        const auto grid = sweep::bloch_scan(sweep::Quantity::ozawa_sum, cfg.a, cfg.b, cfg.psi, opt.grid_theta,
                                            opt.grid_phi);
        const double bound = spin::bounds(cfg.a, cfg.b, r).commutator_bound;
        const double m = *std::min_element(grid.values.begin(), grid.values.end()) - bound;
        if (m < worst) {
            worst = m;
            where = name;
        }
    }
    return finish("ozawa-grid", worst, -1e-9, false, "tightest preset: " + where);
}

SuiteResult random_indirect_models(const Options& opt) {
    Rng rng = derived_rng(opt.seed, 2);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.random_models; ++i) {
        const int ds = 2 + (i % 2);
        const int dp = 2 + ((i / 2) % 2);
        const MeasurementModel model = from_indirect(random_indirect_model(ds, dp, rng));
        const Matrix a = random_hermitian(ds, rng);
        const Matrix b = random_hermitian(ds, rng);
        const Vector psi = random_state(ds, rng);
        const UncertaintyReport rep = evaluate_relations(model, a, b, psi);
        worst = std::min(worst, rep.ozawa_lhs - rep.commutator_bound);
    }
    return finish("random-indirect-models", worst, -1e-9, false);
}

SuiteResult bound_hierarchy(const Options& opt) {
    Rng rng = derived_rng(opt.seed, 3);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.random_configs; ++i) {
        const spin::SpinConfig c{random_axis(rng), random_axis(rng), random_axis(rng), random_axis(rng)};
        const UncertaintyReport r = spin::report(c);
        worst = std::min({worst, r.sigma_a * r.sigma_b - r.schroedinger_bound,
                          r.schroedinger_bound - r.robertson_bound, r.combined_lhs - r.ozawa_lhs,
                          r.ozawa_lhs - r.heisenberg_lhs, r.combined_lhs - r.commutator_bound});
    }
    return finish("bound-hierarchy", worst, -1e-12, false);
}

std::vector<SuiteResult> run_all(const Options& opt) {
    return {oracle_equivalence(opt), three_state_identity(opt), ozawa_grid(opt), random_indirect_models(opt),
            bound_hierarchy(opt)};
}

}  // namespace spinmeas::verify
