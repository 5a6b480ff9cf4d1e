#pragma once

#include <array>

#include "pandasim/demography.hpp"
#include "pandasim/rng.hpp"

namespace pandasim {

/// Linear per-unit economics of one business line.
struct BusinessLine {
    double labor_per_unit = 1.0;     // labor units needed per unit
    double land_per_unit = 0.0;      // Mu per unit (agriculture)
    double capital_threshold = 0.0;  // CNY of capital needed to run it at all (lodging)
    double return_per_unit = 0.0;    // CNY / year
    double unit_cap = -1.0;          // < 0: no fixed cap (lodging is capped by rooms)
};

struct BusinessParams {
    // Agriculture: 1 unit = 1 Mu. TempJob: 1 unit = 1 labor unit. Lodging: 1 unit = 1 room.
    BusinessLine agriculture{0.3, 1.0, 0.0, 3000.0, -1.0};
    BusinessLine temp_job{1.0, 0.0, 0.0, 12000.0, 2.0};
    BusinessLine lodging{1.0, 0.0, 20000.0, 20000.0, -1.0};
    double baseline_income = 15000.0;  // LeisureMax households stop allocating here
    double risk_premium = 0.5;
    // G2G: opportunity wage of the labor a reverted Mu frees (CNY per labor unit-year).
    double opportunity_wage = 6000.0;
    double parcel_quality_sigma = 0.2;  // yearly parcel-level noise, clamped to [0.5, 1.5]
    // F2E: imputed firewood collection cost per kg at a draw of 1.
    double firewood_labor_cost_per_kg = 0.4;
    double leisure_f2e_factor = 1.5;    // LeisureMax households value collection time higher
    double f2e_noise_sigma = 0.15;      // yearly noise on the adoption draw
    double f2e_baseline = 0.0;          // adoption probability without a subsidy

    const BusinessLine& line(Business b) const;
    void validate() const;
};

struct HouseholdPlan {
    std::array<double, kBusinessCount> labor{};  // labor units per business
    std::array<double, kBusinessCount> units{};  // Mu / labor units / rooms per business
    std::array<double, kBusinessCount> income{};
    double cultivated_mu = 0.0;
    double expected_income = 0.0;

    double labor_total() const { return labor[0] + labor[1] + labor[2]; }
    BusinessSet businesses() const;
};

/// Greedy marginal-return allocation in chunks of one labor unit (the last chunk may be
/// fractional). ProfitMax households stop when labor or every cap binds; LeisureMax
/// households additionally stop once expected income reaches the baseline. Returns are
/// linear, so the greedy fill is optimal for ProfitMax.
HouseholdPlan decide_production(const Household& household, const BusinessParams& params);

/// Per-Mu opportunity cost of reverting land: farm profit net of the freed labor's wage.
double agricultural_profit_per_mu(const Household& household, const BusinessParams& params);

/// New total enrolled area. Each not-yet-enrolled parcel (1 Mu; a trailing fractional
/// parcel counts by its size) enrolls when compensation > 0 and
///   compensation >= profit_per_mu * parcel_quality * (1 + risk_attitude * risk_premium).
/// Enrollment is absorbing. Exactly one draw per not-yet-enrolled parcel.
double decide_g2g_participation(const Household& household, double compensation,
                                const BusinessParams& params, Rng& rng);

/// Whether the household (already participating or not) participates this year.
/// With a subsidy the household adopts when the electricity cost of replacing a kg of
/// firewood (2.25 kWh at the subsidized price) is no more than its imputed collection
/// cost per kg scaled by its draw. Throws DomainError outside (0, 0.65]. Adoption is
/// absorbing. Exactly two draws per call.
bool decide_f2e_participation(const Household& household, double subsidized_price,
                              const BusinessParams& params, Rng& rng);

/// Business income plus G2G compensation minus energy spending.
double household_income(const HouseholdPlan& plan, double compensation_received,
                        double electricity_cost);

}  // namespace pandasim
