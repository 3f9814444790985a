#pragma once

// Scenario configuration files.
//
// Line-oriented key = value pairs grouped in sections; `#` starts a comment.
//
//   preset = standard              # optional, before any section
//   preset_parameter = 60deg       # optional φ_B / θ_B / θ_OA / θ_ψ of the preset
//   [observables]
//   a = 1 0 0                      # or a_theta = 90deg, a_phi = 0deg
//   b = 0 1 0
//   [state]
//   theta = 0deg                   # ψ = cos(θ/2)|+z⟩ + e^{iφ} sin(θ/2)|−z⟩
//   phi = 0deg
//   [path]
//   kind = equator                 # equator | latitude | custom
//   theta_oa = 60deg               # latitude only
//   phi_start = 0deg
//   phi_end = 360deg
//   samples = 361
//   axis = 1 0 0                   # custom only, repeat per sample
//   [apparatus]
//   mode = exact                   # exact | three_state | monte_carlo
//   efficiency = 0.96
//   jitter = 1.5deg
//   counts = 4000                  # expected counts per port setting
//   replicates = 100
//   seed = 0
//   threads = 1
//   [output]
//   format = csv                   # csv | json
//   directory = .
//   stem = sweep
//
// Angles must carry an explicit `deg` or `rad` suffix.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "spinmeas/errors.hpp"
#include "spinmeas/sweep.hpp"

namespace spinmeas::config {

class ConfigError : public InvalidInput {
public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

enum class Format { csv, json };

struct OutputSpec {
    Format format = Format::csv;
    std::string directory = ".";
    std::string stem = "sweep";
};

struct RunConfig {
    sweep::ScenarioConfig scenario;
    OutputSpec output;
    /// Keys that were not given and took their default value.
    std::vector<std::string> defaulted;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Parses "1.5deg" or "0.02rad"; throws InvalidInput without a unit suffix.
double parse_angle(std::string_view text);

std::string_view to_string(Format f);
std::string_view to_string(sweep::Mode m);
std::string_view to_string(sweep::PathKind k);

/// Echo of the fully resolved configuration for the run manifest.
nlohmann::json to_json(const RunConfig& config);

}  // namespace spinmeas::config
