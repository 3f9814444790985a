#pragma once

// CSV / JSON serialization of sweep rows and Bloch grids, plus the run
// manifest. Numbers are written with 17 significant digits; rows keep their
// sample order.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "spinmeas/config.hpp"
#include "spinmeas/sweep.hpp"

namespace spinmeas::emit {

/// Column names of the sweep table, in output order.
const std::vector<std::string>& row_columns();

/// "%.17g"
std::string format_number(double v);

void write_rows_csv(const std::vector<sweep::SweepRow>& rows, std::ostream& out);
void write_rows_json(const std::vector<sweep::SweepRow>& rows, std::ostream& out);

/// Columns theta_rad, phi_rad, value; θ-major.
void write_grid_csv(const sweep::BlochGrid& grid, std::ostream& out);
void write_grid_json(const sweep::BlochGrid& grid, std::ostream& out);

std::string render_rows(const std::vector<sweep::SweepRow>& rows, config::Format format);
std::string render_grid(const sweep::BlochGrid& grid, config::Format format);

/// Writes to a sibling temporary file and renames it over `path`. Throws
/// InvalidInput when the destination cannot be written.
void write_atomically(const std::filesystem::path& path, const std::string& content);

struct RunManifest {
    std::string tool_version;
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<std::string> outputs;
    nlohmann::json extra = nlohmann::json::object();

    nlohmann::json to_json() const;
};

std::string tool_version();
/// UTC, ISO 8601.
std::string utc_timestamp();

}  // namespace spinmeas::emit
