#pragma once

#include <string>
#include <vector>

#include "pandasim/demography.hpp"
#include "pandasim/energy.hpp"

namespace pandasim {

/// One (G2G compensation, F2E subsidized price) combination. Prices are held on a
/// 1e-6 grid so lattice values compare exactly.
struct PolicyScenario {
    double g2g_compensation = 0.0;  // CNY/Mu; 0 = no G2G
    double f2e_price = kStandardElectricityPrice;  // CNY/kWh; 0.65 = no subsidy

    PolicyScenario() = default;
    PolicyScenario(double g2g, double price);

    bool is_null() const;
    /// "g2g=900,f2e=0.35"
    std::string id() const;

    friend bool operator==(const PolicyScenario&, const PolicyScenario&) = default;
    /// g2g ascending, then price descending (lattice order).
    friend bool operator<(const PolicyScenario& a, const PolicyScenario& b);
};

/// Inclusive arithmetic lattice min, min+step, ..., max.
struct Lattice {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
    void validate(const char* name) const;
};

struct ScenarioLattices {
    Lattice g2g{0.0, 2000.0, 100.0};
    Lattice f2e{0.05, kStandardElectricityPrice, 0.05};
    void validate() const;
};

/// Cross product ordered by g2g ascending, then price descending from the top.
std::vector<PolicyScenario> scenario_grid(const ScenarioLattices& lattices = {});

/// Parse "g2g=0..2000:100,f2e=0.65" style restrictions. Each axis is either a single
/// value or a range "lo..hi:step"; a missing axis keeps the default lattice.
/// Throws ConfigError.
ScenarioLattices parse_scenario_spec(const std::string& spec, const ScenarioLattices& defaults = {});

struct PolicyLedger {
    double g2g_expenditure = 0.0;
    double f2e_subsidy = 0.0;
    double financial_burden = 0.0;
};

/// g2g = compensation * total enrolled Mu; f2e = sum of subsidy paid. `profiles` are
/// indexed like `households`.
PolicyLedger settle_year(const std::vector<Household>& households, const PolicyScenario& scenario,
                         const std::vector<EnergyProfile>& profiles);

/// Report formatting only.
inline constexpr double kUsdPerCny = 0.157;
inline constexpr double kHectaresPerMu = 0.067;

}  // namespace pandasim
