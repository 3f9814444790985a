#include "spinmeas/emit.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "spinmeas/errors.hpp"

#ifndef SPINMEAS_VERSION
#define SPINMEAS_VERSION "0.0.0"
#endif

namespace spinmeas::emit {

namespace {

// One table cell per column; empty optional means "not available".
std::vector<std::optional<double>> row_values(const sweep::SweepRow& r) {
    std::vector<std::optional<double>> v = {
        r.phi_oa,          r.theta_oa,          r.exact.eps,       r.exact.eta,
        r.exact.sigma_a,   r.exact.sigma_b,     r.exact.commutator_bound, r.exact.heisenberg_lhs,
        r.exact.ozawa_lhs, r.exact.combined_lhs,
    };
    if (r.estimate) {
        v.insert(v.end(), {r.estimate->eps.mean, r.estimate->eps.sd, r.estimate->eta.mean, r.estimate->eta.sd,
                           r.estimate->sigma_a.mean, r.estimate->sigma_a.sd, r.estimate->sigma_b.mean,
                           r.estimate->sigma_b.sd});
    } else {
        v.insert(v.end(), 8, std::nullopt);
    }
    v.insert(v.end(), {r.ports.pp, r.ports.pm, r.ports.mp, r.ports.mm});
    return v;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

const std::vector<std::string>& row_columns() {
    static const std::vector<std::string> cols = {
        "phi_oa_rad", "theta_oa_rad", "eps_exact",  "eta_exact",  "sigma_a",       "sigma_b",
        "bound",      "heis_lhs",     "ozawa_lhs",  "combined_lhs", "eps_est",     "eps_est_sd",
        "eta_est",    "eta_est_sd",   "sigma_a_est", "sigma_a_est_sd", "sigma_b_est", "sigma_b_est_sd",
        "p_pp",       "p_pm",         "p_mp",       "p_mm",
    };
    return cols;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_rows_csv(const std::vector<sweep::SweepRow>& rows, std::ostream& out) {
    const auto& cols = row_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        const auto vals = row_values(r);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out << ',';
            if (vals[i]) out << format_number(*vals[i]);
        }
        out << '\n';
    }
}

void write_rows_json(const std::vector<sweep::SweepRow>& rows, std::ostream& out) {
    const auto& cols = row_columns();
    out << "{\n  \"columns\": [";
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? ", " : "") << json_string(cols[i]);
    out << "],\n  \"rows\": [";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto vals = row_values(rows[k]);
        out << (k ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < vals.size(); ++i) {
            out << (i ? ", " : "") << json_string(cols[i]) << ": " << (vals[i] ? format_number(*vals[i]) : "null");
        }
        out << '}';
    }
    out << (rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void write_grid_csv(const sweep::BlochGrid& grid, std::ostream& out) {
    out << "theta_rad,phi_rad," << sweep::to_string(grid.quantity) << '\n';
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            out << format_number(grid.thetas[static_cast<std::size_t>(i)]) << ','
                << format_number(grid.phis[static_cast<std::size_t>(j)]) << ',' << format_number(grid.at(i, j))
                << '\n';
        }
    }
}

void write_grid_json(const sweep::BlochGrid& grid, std::ostream& out) {
    out << "{\n  \"quantity\": " << json_string(std::string(sweep::to_string(grid.quantity)))
        << ",\n  \"n_theta\": " << grid.n_theta << ",\n  \"n_phi\": " << grid.n_phi << ",\n  \"order\": \"theta-major\""
        << ",\n  \"theta_rad\": [";
    for (int i = 0; i < grid.n_theta; ++i) out << (i ? ", " : "") << format_number(grid.thetas[static_cast<std::size_t>(i)]);
    out << "],\n  \"phi_rad\": [";
    for (int j = 0; j < grid.n_phi; ++j) out << (j ? ", " : "") << format_number(grid.phis[static_cast<std::size_t>(j)]);
    out << "],\n  \"values\": [";
    for (std::size_t k = 0; k < grid.values.size(); ++k) out << (k ? ", " : "") << format_number(grid.values[k]);
    out << "]\n}\n";
}

std::string render_rows(const std::vector<sweep::SweepRow>& rows, config::Format format) {
    if (rows.empty()) throw InvalidInput("nothing to emit: no sweep rows");
    std::ostringstream ss;
    format == config::Format::csv ? write_rows_csv(rows, ss) : write_rows_json(rows, ss);
    return ss.str();
}

std::string render_grid(const sweep::BlochGrid& grid, config::Format format) {
    if (grid.values.empty()) throw InvalidInput("nothing to emit: empty grid");
    std::ostringstream ss;
    format == config::Format::csv ? write_grid_csv(grid, ss) : write_grid_json(grid, ss);
    return ss.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw InvalidInput("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InvalidInput("cannot move output into place at '" + path.string() + "'");
    }
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"tool", "spinmeas"},      {"tool_version", tool_version},
                          {"command", command},       {"config", config},
                          {"master_seed", seed},      {"timestamp", timestamp},
                          {"outputs", outputs},       {"extra", extra}};
}

std::string tool_version() { return SPINMEAS_VERSION; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace spinmeas::emit
