#include "spinmeas/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "spinmeas/errors.hpp"
#include "spinmeas/spin.hpp"
#include "spinmeas/threestate.hpp"

namespace spinmeas::sweep {

namespace {

constexpr double pi = std::numbers::pi;

double linspace_at(double lo, double hi, int n, int i) {
    if (i == n - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

double heisenberg_margin(const UnitAxis& a, const UnitAxis& b, double bound, double theta, double phi) {
    const UnitAxis o = UnitAxis::from_angles(theta, phi);
    return spin::error_exact(a, o) * spin::disturbance_exact(b, o) - bound;
}

SweepRow evaluate_row(const ScenarioConfig& cfg, const PathSample& s, std::size_t index) {
    SweepRow row;
    row.phi_oa = s.phi;
    row.theta_oa = s.theta;
    row.o_a = s.axis;
    const UnitAxis r = cfg.psi.direction();
    row.exact = spin::report({cfg.a, cfg.b, r, s.axis});
    std::tie(row.eps_theory, row.eta_theory) = theory_curves(cfg, s.theta, s.phi, s.axis);
    row.ports = beamline::port_probabilities(cfg.psi, s.axis, cfg.b);

    switch (cfg.mode) {
        case Mode::exact:
            break;
        case Mode::three_state_exact: {
            const Operator2 a_op = spin_observable(cfg.a.vec());
            const Operator2 b_op = spin_observable(cfg.b.vec());
            const auto a_set = threestate::auxiliary_states(a_op, cfg.psi);
            const auto b_set = threestate::auxiliary_states(b_op, cfg.psi);
            const Operator2 o_a = spin_observable(s.axis.vec());
            const Operator2 o_b = spin::modified_observable(cfg.b, s.axis);
            beamline::MonteCarloEstimate est;
            est.eps.mean = threestate::estimate_error(threestate::exact_expectations(o_a, a_set),
                                                      threestate::NormsSquared::of(a_set));
            est.eta.mean = threestate::estimate_disturbance(threestate::exact_expectations(o_b, b_set),
                                                            threestate::NormsSquared::of(b_set));
            const double ea = beamline::single_axis_expectation(cfg.psi, cfg.a, beamline::Apparatus::A1);
            const double eb = beamline::single_axis_expectation(cfg.psi, cfg.b, beamline::Apparatus::A2);
            est.sigma_a.mean = std::sqrt(std::max(0.0, 1.0 - ea * ea));
            est.sigma_b.mean = std::sqrt(std::max(0.0, 1.0 - eb * eb));
            row.estimate = est;
            break;
        }
        case Mode::monte_carlo: {
            const beamline::ScenarioPoint point{cfg.a, cfg.b, s.axis, cfg.psi};
            row.estimate =
                beamline::run_with_error_bars(point, cfg.replicates, cfg.imperfections,
                                              beamline::CountingSetup::with_counts(cfg.counts_per_setting), index);
            break;
        }
    }
    return row;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (path.kind == PathKind::custom) {
        if (path.axes.size() < 2) throw InvalidInput("custom path needs at least two axes");
    } else if (samples < 2) {
        throw InvalidInput("samples must be at least 2");
    }
    if (mode == Mode::monte_carlo) {
        if (replicates < 2) throw InvalidInput("replicates must be at least 2");
        if (!(counts_per_setting > 0.0)) throw InvalidInput("counts per setting must be positive");
    }
    imperfections.validate();
}

std::vector<std::string> preset_names() {
    return {"standard", "latitude", "phiB", "thetaB", "thetaB-lat60", "thetaB-latB", "psi"};
}

ScenarioConfig preset(std::string_view name, std::optional<double> parameter) {
    ScenarioConfig c;
    c.name = std::string(name);
    if (name == "standard") {
        c.family = Family::standard;
    } else if (name == "latitude") {
        c.family = Family::latitude;
        c.path.kind = PathKind::latitude;
        c.path.theta_oa = parameter.value_or(pi / 3.0);
        c.family_parameter = c.path.theta_oa;
    } else if (name == "phiB") {
        c.family = Family::phi_b;
        c.family_parameter = parameter.value_or(pi / 3.0);
        c.b = UnitAxis::from_angles(pi / 2.0, c.family_parameter);
    } else if (name == "thetaB" || name == "thetaB-lat60" || name == "thetaB-latB") {
        c.family = Family::theta_b;
        c.family_parameter = parameter.value_or(pi / 4.0);
        c.b = UnitAxis::from_angles(c.family_parameter, pi / 2.0);
        if (name == "thetaB-lat60") {
            c.path.kind = PathKind::latitude;
            c.path.theta_oa = pi / 3.0;
        } else if (name == "thetaB-latB") {
            c.path.kind = PathKind::latitude;
            c.path.theta_oa = c.family_parameter;
        }
    } else if (name == "psi") {
        c.family = Family::psi;
        c.family_parameter = parameter.value_or(pi / 4.0);
        c.psi = SpinState::from_angles(c.family_parameter, pi / 12.0);
    } else {
        throw InvalidInput("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

std::vector<PathSample> path_samples(const ScenarioConfig& cfg) {
    std::vector<PathSample> out;
    if (cfg.path.kind == PathKind::custom) {
        out.reserve(cfg.path.axes.size());
        for (const auto& ax : cfg.path.axes) out.push_back({ax.polar(), ax.azimuth(), ax});
        return out;
    }
    const double theta = cfg.path.kind == PathKind::equator ? pi / 2.0 : cfg.path.theta_oa;
    out.reserve(static_cast<std::size_t>(cfg.samples));
    for (int i = 0; i < cfg.samples; ++i) {
        const double phi = linspace_at(cfg.path.phi_start, cfg.path.phi_end, cfg.samples, i);
        out.push_back({theta, phi, UnitAxis::from_angles(theta, phi)});
    }
    return out;
}

std::pair<double, double> theory_curves(const ScenarioConfig& cfg, double theta_oa, double phi_oa,
                                        const UnitAxis& o_a) {
    const bool equator = cfg.path.kind == PathKind::equator;
    const bool on_circle = cfg.path.kind != PathKind::custom;
    const double s = std::sin(theta_oa);
    switch (cfg.family) {
        case Family::standard:
        case Family::psi:
            if (equator) {
                return {2.0 * std::abs(std::sin(phi_oa / 2.0)), std::sqrt(2.0) * std::abs(std::cos(phi_oa))};
            }
            [[fallthrough]];
        case Family::latitude:
            if (on_circle) {
                const double sp = std::sin(phi_oa);
                return {std::sqrt(std::max(0.0, 2.0 - 2.0 * std::cos(phi_oa) * s)),
                        std::sqrt(std::max(0.0, 2.0 - 2.0 * sp * sp * s * s))};
            }
            break;
        case Family::phi_b:
            if (equator) {
                return {2.0 * std::abs(std::sin(phi_oa / 2.0)),
                        std::sqrt(2.0) * std::abs(std::sin(phi_oa - cfg.family_parameter))};
            }
            break;
        case Family::theta_b:
            if (on_circle) {
                return {std::sqrt(std::max(0.0, 2.0 - 2.0 * std::cos(phi_oa) * s)),
                        spin::disturbance_exact(cfg.b, o_a)};
            }
            break;
        case Family::custom:
            break;
    }
    return {spin::error_exact(cfg.a, o_a), spin::disturbance_exact(cfg.b, o_a)};
}

std::vector<SweepRow> run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::vector<PathSample> samples = path_samples(cfg);
    std::vector<SweepRow> rows(samples.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(samples.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < samples.size(); ++i) rows[i] = evaluate_row(cfg, samples[i], i);
        return rows;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < samples.size(); i += workers) rows[i] = evaluate_row(cfg, samples[i], i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::optional<Quantity> parse_quantity(std::string_view name) {
    if (name == "error") return Quantity::error;
    if (name == "disturbance") return Quantity::disturbance;
    if (name == "product") return Quantity::product;
    if (name == "ozawa_sum") return Quantity::ozawa_sum;
    return std::nullopt;
}

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::error:
            return "error";
        case Quantity::disturbance:
            return "disturbance";
        case Quantity::product:
            return "product";
        case Quantity::ozawa_sum:
            return "ozawa_sum";
    }
    return "unknown";
}

BlochGrid bloch_scan(Quantity quantity, const UnitAxis& a, const UnitAxis& b, const SpinState& psi, int n_theta,
                     int n_phi) {
    if (n_theta < 2 || n_phi < 2) throw InvalidInput("Bloch grid resolution must be at least 2 in each direction");
    BlochGrid g;
    g.quantity = quantity;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    for (int i = 0; i < n_theta; ++i) g.thetas.push_back(linspace_at(0.0, pi, n_theta, i));
    for (int j = 0; j < n_phi; ++j) g.phis.push_back(linspace_at(0.0, 2.0 * pi, n_phi, j));
    g.values.reserve(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi));
    const UnitAxis r = psi.direction();
    for (double theta : g.thetas) {
        for (double phi : g.phis) {
            const UnitAxis o = UnitAxis::from_angles(theta, phi);
            switch (quantity) {
                case Quantity::error:
                    g.values.push_back(spin::error_exact(a, o));
                    break;
                case Quantity::disturbance:
                    g.values.push_back(spin::disturbance_exact(b, o));
                    break;
                case Quantity::product:
                    g.values.push_back(spin::error_exact(a, o) * spin::disturbance_exact(b, o));
                    break;
                case Quantity::ozawa_sum:
                    g.values.push_back(spin::report({a, b, r, o}).ozawa_lhs);
                    break;
            }
        }
    }
    return g;
}

ViolationAnalysis violation_analysis(const UnitAxis& a, const UnitAxis& b, const SpinState& psi, double theta_oa,
                                     int resolution) {
    if (resolution < 3) throw InvalidInput("violation analysis needs at least 3 φ samples");
    const double bound = spin::bounds(a, b, psi.direction()).commutator_bound;
    const double h = 2.0 * pi / static_cast<double>(resolution - 1);

    ViolationAnalysis out;
    out.min_margin = std::numeric_limits<double>::infinity();
    std::optional<double> run_start;
    double prev_phi = 0.0;
    for (int i = 0; i < resolution; ++i) {
        const double phi = linspace_at(0.0, 2.0 * pi, resolution, i);
        const double margin = heisenberg_margin(a, b, bound, theta_oa, phi);
        if (margin < out.min_margin) {
            out.min_margin = margin;
            out.argmin_phi = phi;
        }
        const bool violated = margin < -tol::algebraic;
        if (violated && !run_start) run_start = phi;
        if (!violated && run_start) {
            out.violated_intervals.emplace_back(*run_start, prev_phi);
            run_start.reset();
        }
        prev_phi = phi;
    }
    if (run_start) out.violated_intervals.emplace_back(*run_start, prev_phi);

    // Refine the grid minimum within one step on either side.
    auto f = [&](double phi) { return heisenberg_margin(a, b, bound, theta_oa, phi); };
    const auto [phi_star, m_star] =
        boost::math::tools::brent_find_minima(f, out.argmin_phi - h, out.argmin_phi + h, 50);
    if (m_star < out.min_margin) {
        out.min_margin = m_star;
        out.argmin_phi = std::fmod(phi_star + 2.0 * pi, 2.0 * pi);
    }
    out.fulfilled_everywhere = out.min_margin >= -tol::algebraic;
    return out;
}

double violation_threshold(const UnitAxis& a, const UnitAxis& b, const SpinState& psi, double tolerance) {
    auto fulfilled = [&](double theta) { return violation_analysis(a, b, psi, theta).min_margin >= 0.0; };
    double lo = 0.0;
    double hi = pi / 2.0;
    if (!fulfilled(lo)) return 0.0;
    if (fulfilled(hi)) return hi;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (fulfilled(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace spinmeas::sweep
