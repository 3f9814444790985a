// spinmeas: command-line front end for sweeps, Bloch-sphere scans, Monte Carlo
// simulation of the two-apparatus experiment and the property suites.
//
// Exit codes: 0 success, 1 validation error, 2 property-suite failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "spinmeas/config.hpp"
#include "spinmeas/emit.hpp"
#include "spinmeas/errors.hpp"
#include "spinmeas/sweep.hpp"
#include "spinmeas/verify.hpp"

namespace fs = std::filesystem;
using namespace spinmeas;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_property = 2;

struct ScenarioArgs {
    std::string config_path;
    std::string preset;
    std::string parameter;
    std::optional<int> samples;
    std::optional<int> replicates;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string format;
    std::string mode;
    std::string out_dir;
    std::string stem;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args, bool with_mode) {
    cmd->add_option("--config", args.config_path, "Scenario configuration file");
    cmd->add_option("--preset", args.preset, "standard|latitude|phiB|thetaB|thetaB-lat60|thetaB-latB|psi");
    cmd->add_option("--parameter", args.parameter, "Preset parameter with unit suffix, e.g. 60deg");
    cmd->add_option("--samples", args.samples, "Samples along the o_a path");
    cmd->add_option("--replicates", args.replicates, "Monte Carlo replicates per row");
    cmd->add_option("--seed", args.seed, "Master seed");
    cmd->add_option("--threads", args.threads, "Worker threads for row evaluation");
    cmd->add_option("--format", args.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    if (with_mode) {
        cmd->add_option("--mode", args.mode, "exact|three_state|monte_carlo")
            ->check(CLI::IsMember({"exact", "three_state", "monte_carlo"}));
    }
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--stem", args.stem, "Output file stem");
}

config::RunConfig resolve(const ScenarioArgs& args, const std::string& default_stem) {
    if (!args.config_path.empty() && !args.preset.empty()) {
        throw InvalidInput("--config and --preset are mutually exclusive");
    }
    config::RunConfig rc;
    if (!args.config_path.empty()) {
        if (!args.parameter.empty()) throw InvalidInput("--parameter applies to --preset only");
        rc = config::load_config(args.config_path);
    } else {
        std::optional<double> param;
        if (!args.parameter.empty()) param = config::parse_angle(args.parameter);
        rc.scenario = sweep::preset(args.preset.empty() ? "standard" : args.preset, param);
        rc.output.stem = default_stem;
        rc.defaulted = {"apparatus.efficiency", "apparatus.jitter", "apparatus.counts", "apparatus.seed"};
    }
    auto& sc = rc.scenario;
    if (args.samples) sc.samples = *args.samples;
    if (args.replicates) sc.replicates = *args.replicates;
    if (args.seed) sc.imperfections.rng_seed = *args.seed;
    if (args.threads) sc.threads = *args.threads;
    if (args.mode == "exact") sc.mode = sweep::Mode::exact;
    if (args.mode == "three_state") sc.mode = sweep::Mode::three_state_exact;
    if (args.mode == "monte_carlo") sc.mode = sweep::Mode::monte_carlo;
    if (args.format == "csv") rc.output.format = config::Format::csv;
    if (args.format == "json") rc.output.format = config::Format::json;
    if (!args.out_dir.empty()) rc.output.directory = args.out_dir;
    if (!args.stem.empty()) rc.output.stem = args.stem;
    sc.validate();
    return rc;
}

void write_outputs(const config::RunConfig& rc, const std::string& command, const std::string& body,
                   nlohmann::json extra) {
    const fs::path dir(rc.output.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InvalidInput("cannot create output directory '" + dir.string() + "'");
    const fs::path data = dir / (rc.output.stem + "." + std::string(config::to_string(rc.output.format)));
    const fs::path manifest_path = dir / (rc.output.stem + ".manifest.json");
    emit::write_atomically(data, body);

    emit::RunManifest manifest;
    manifest.tool_version = emit::tool_version();
    manifest.command = command;
    manifest.config = config::to_json(rc);
    manifest.seed = rc.scenario.imperfections.rng_seed;
    manifest.timestamp = emit::utc_timestamp();
    manifest.outputs = {data.string()};
    manifest.extra = std::move(extra);
    emit::write_atomically(manifest_path, manifest.to_json().dump(2) + "\n");
    std::cout << data.string() << '\n' << manifest_path.string() << '\n';
}

int run_sweep(const ScenarioArgs& args, bool force_monte_carlo) {
    config::RunConfig rc = resolve(args, force_monte_carlo ? "simulate" : "sweep");
    if (force_monte_carlo) {
        rc.scenario.mode = sweep::Mode::monte_carlo;
        rc.scenario.validate();
    }
    const auto rows = sweep::run_scenario(rc.scenario);
    write_outputs(rc, force_monte_carlo ? "simulate" : "sweep", emit::render_rows(rows, rc.output.format),
                  {{"rows", rows.size()}});
    return exit_ok;
}

std::pair<int, int> parse_resolution(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw InvalidInput("resolution must look like 181x361");
    try {
        std::size_t p1 = 0;
        std::size_t p2 = 0;
        const int nt = std::stoi(text.substr(0, x), &p1);
        const int np = std::stoi(text.substr(x + 1), &p2);
        if (p1 != x || p2 != text.size() - x - 1) throw InvalidInput("resolution must look like 181x361");
        return {nt, np};
    } catch (const std::logic_error&) {
        throw InvalidInput("resolution must look like 181x361");
    }
}

int run_bloch_scan(const ScenarioArgs& args, const std::string& quantity_name, const std::string& resolution) {
    config::RunConfig rc = resolve(args, "bloch-" + quantity_name);
    const auto quantity = sweep::parse_quantity(quantity_name);
    if (!quantity) throw InvalidInput("unknown quantity '" + quantity_name + "'");
    const auto [nt, np] = parse_resolution(resolution);
    const auto grid = sweep::bloch_scan(*quantity, rc.scenario.a, rc.scenario.b, rc.scenario.psi, nt, np);
    write_outputs(rc, "bloch-scan", emit::render_grid(grid, rc.output.format),
                  {{"quantity", quantity_name}, {"n_theta", nt}, {"n_phi", np}, {"order", "theta-major"}});
    return exit_ok;
}

int run_verify(std::uint64_t seed, bool quick) {
    verify::Options opt;
    opt.seed = seed;
    if (quick) {
        opt.random_configs = 1000;
        opt.random_models = 200;
        opt.grid_theta = 91;
        opt.grid_phi = 181;
    }
    bool ok = true;
    for (const auto& r : verify::run_all(opt)) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  worst=" << emit::format_number(r.worst)
                  << " limit=" << emit::format_number(r.limit);
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << '\n';
        ok = ok && r.passed;
    }
    return ok ? exit_ok : exit_property;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Error-disturbance relations for projective spin-1/2 measurements"};
    app.require_subcommand(1);
    app.set_version_flag("--version", emit::tool_version());

    std::uint64_t verify_seed = 1;
    bool verify_quick = false;
    auto* verify_cmd = app.add_subcommand("verify", "Run the property suites");
    verify_cmd->add_option("--seed", verify_seed, "Master seed");
    verify_cmd->add_flag("--quick", verify_quick, "Smaller sample sizes");

    ScenarioArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a scenario along its o_a path");
    add_scenario_options(sweep_cmd, sweep_args, true);

    ScenarioArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo simulation of the experiment with error bars");
    add_scenario_options(sim_cmd, sim_args, false);

    ScenarioArgs scan_args;
    std::string quantity = "product";
    std::string resolution = "181x361";
    auto* scan_cmd = app.add_subcommand("bloch-scan", "Closed-form values over all o_a directions");
    add_scenario_options(scan_cmd, scan_args, false);
    scan_cmd->add_option("--quantity", quantity, "error|disturbance|product|ozawa_sum")
        ->check(CLI::IsMember({"error", "disturbance", "product", "ozawa_sum"}));
    scan_cmd->add_option("--resolution", resolution, "THETAxPHI grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (*verify_cmd) return run_verify(verify_seed, verify_quick);
        if (*sweep_cmd) return run_sweep(sweep_args, false);
        if (*sim_cmd) return run_sweep(sim_args, true);
        if (*scan_cmd) return run_bloch_scan(scan_args, quantity, resolution);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    return exit_invalid;
}
