#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pandasim/analysis.hpp"
#include "pandasim/engine.hpp"
#include "pandasim/policy.hpp"

namespace pandasim {

struct AnalysisConfig {
    bool f2e_budget_uses_x2_linear = false;
    std::string habitat_form = "cubic";  // cubic | quadratic
    std::uint64_t fit_seed = 20240;

    SurrogateForm habitat_surrogate() const;
    SurrogateForm f2e_surrogate() const;
};

struct RunConfig {
    SimConfig sim;
    ScenarioLattices scenarios;
    AnalysisConfig analysis;
    int n_replicates = 30;
    std::uint64_t base_seed = 20240607;
    std::string output_dir = "out";

    void validate() const;
};

/// Parse JSON text. Missing keys keep their defaults; unknown keys, wrong types and
/// invalid values throw ConfigError carrying the 1-based line when it can be located.
RunConfig parse_run_config(const std::string& text);

/// Throws ConfigError naming the path when the file cannot be read.
RunConfig load_run_config(const std::string& path);

/// Every field, defaults included, in a fixed key order.
nlohmann::ordered_json to_json(const RunConfig& config);

/// FNV-1a over the canonical dump of everything that affects simulated values.
std::string config_hash(const RunConfig& config);

}  // namespace pandasim
