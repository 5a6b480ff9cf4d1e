#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pandasim/demography.hpp"
#include "pandasim/economy.hpp"
#include "pandasim/energy.hpp"
#include "pandasim/firewood.hpp"
#include "pandasim/policy.hpp"
#include "pandasim/worldgen.hpp"

namespace pandasim {

/// Everything one replicate needs.
struct SimConfig {
    WorldConfig world;
    HabitatWeights habitat_weights;
    DemographyRates demography;
    HouseholdTraits traits;
    BusinessParams economy;
    EnergyCoefficients energy;
    CarbonFactors carbon;
    FirewoodParams firewood;
    int households = 300;
    int start_year = 2010;
    int years = 14;
    double savings_rate = 0.1;  // share of net income added to capital
    bool independent_scenario_seeds = false;

    void validate() const;
};

struct YearlyIndicators {
    int year = 0;
    double reverted_area_mu = 0.0;
    double firewood_kg = 0.0;
    double electricity_kwh = 0.0;
    double g2g_expenditure = 0.0;
    double f2e_subsidy = 0.0;
    double financial_burden = 0.0;
    double carbon_kg = 0.0;
    double habitat_index = 0.0;
    double habitat_index_normalized = 0.0;
    double gross_revenue = 0.0;
    double gross_economic_benefits = 0.0;
    // Diagnostics.
    double tend_kwh_eq = 0.0;
    double firewood_unmet_kg = 0.0;
    double f2e_participants = 0.0;
    double population = 0.0;
    double households = 0.0;

    struct Field {
        const char* name;
        double YearlyIndicators::*member;
    };
    static const std::array<Field, 16>& fields();
};

/// Per household-year energy record, for balance audits.
struct HouseholdEnergyRecord {
    int year = 0;
    std::int64_t household_id = 0;
    EnergyProfile profile;
};
using EnergyObserver = std::function<void(const HouseholdEnergyRecord&)>;

/// Seed of replicate `index`: base_seed XOR index.
std::uint64_t replicate_seed(std::uint64_t base_seed, int index);

/// One 14-year run. Within each year: disturbance clocks age, demography, policy
/// participation, production, energy, firewood trips, land reversion and cultivation,
/// succession and stock replenishment, habitat quality, indicator aggregation.
std::vector<YearlyIndicators> run_replicate(const SimConfig& config, const PolicyScenario& scenario,
                                            std::uint64_t seed, const EnergyObserver& observer = {});

/// As above, starting from an already generated world (must equal generate_world(config.world, seed)).
std::vector<YearlyIndicators> run_replicate(const SimConfig& config, const PolicyScenario& scenario,
                                            std::uint64_t seed, const Landscape& world,
                                            const EnergyObserver& observer = {});

struct ReplicateRun {
    int index = 0;
    std::vector<YearlyIndicators> years;
};

struct ScenarioResult {
    PolicyScenario scenario;
    std::vector<YearlyIndicators> per_year_mean;
    std::vector<YearlyIndicators> per_year_stddev;  // sample standard deviation, 0 for one replicate
    int n_replicates = 0;

    const YearlyIndicators& reference_year() const { return per_year_mean.back(); }
};

/// Means and standard deviations per year, summed in replicate-index order so the
/// result does not depend on the order runs arrive in.
ScenarioResult aggregate_replicates(const PolicyScenario& scenario, std::vector<ReplicateRun> runs);

ScenarioResult run_scenario(const SimConfig& config, const PolicyScenario& scenario, int n_replicates,
                            std::uint64_t base_seed);

struct SweepMetadata {
    std::string version;
    std::string config_hash;
    std::uint64_t base_seed = 0;
    int n_replicates = 0;
    int start_year = 2010;
    int years = 14;
};

struct SweepResult {
    SweepMetadata metadata;
    std::vector<ScenarioResult> results;  // in input scenario order

    const ScenarioResult* find(const PolicyScenario& s) const;
};

struct SweepOptions {
    int threads = 0;             // <= 0: PANDA_SIM_THREADS or hardware concurrency
    EnergyObserver observer;     // must be thread-safe when threads > 1
    std::string config_hash;
};

/// Every scenario is run with the same replicate seeds (common random numbers) unless
/// config.independent_scenario_seeds is set.
SweepResult run_sweep(const SimConfig& config, const std::vector<PolicyScenario>& scenarios,
                      int n_replicates, std::uint64_t base_seed, const SweepOptions& options = {});

int default_thread_count();

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pandasim
