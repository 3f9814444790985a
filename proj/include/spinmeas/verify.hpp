#pragma once

// Property suites run by `spinmeas verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace spinmeas::verify {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;    ///< worst observed deviation / margin
    double limit = 0.0;    ///< threshold it is compared against
    std::string detail;
};

struct Options {
    std::uint64_t seed = 1;
    int random_configs = 10000;
    int random_models = 1000;
    int grid_theta = 181;
    int grid_phi = 361;
};

/// ε and η from moment operators, sum forms and closed forms agree pairwise.
SuiteResult oracle_equivalence(const Options& opt);
/// Three-state reconstruction from exact expectations equals the closed forms
/// on the Bloch grid for every scenario preset.
SuiteResult three_state_identity(const Options& opt);
/// Ozawa's relation on the Bloch grid for every scenario preset.
SuiteResult ozawa_grid(const Options& opt);
/// Ozawa's relation for random indirect models with d_S, d_P ∈ {2, 3}.
SuiteResult random_indirect_models(const Options& opt);
/// σ_Aσ_B ≥ Schrödinger ≥ Robertson and combined ≥ Ozawa ≥ Heisenberg-form lhs.
SuiteResult bound_hierarchy(const Options& opt);

std::vector<SuiteResult> run_all(const Options& opt);

}  // namespace spinmeas::verify
