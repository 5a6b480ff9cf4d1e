#include "pandasim/economy.hpp"

#include <algorithm>
#include <cmath>

#include "pandasim/energy.hpp"
#include "pandasim/error.hpp"

namespace pandasim {

namespace {
constexpr double kEps = 1e-12;
}

const BusinessLine& BusinessParams::line(Business b) const {
    switch (b) {
    case Business::Agriculture: return agriculture;
    case Business::TempJob: return temp_job;
    case Business::Lodging: return lodging;
    }
    return agriculture;
}

void BusinessParams::validate() const {
    for (const BusinessLine* l : {&agriculture, &temp_job, &lodging}) {
        if (!(l->labor_per_unit > 0.0)) throw ConfigError("economy: labor_per_unit must be > 0");
        if (l->land_per_unit < 0.0 || l->capital_threshold < 0.0 || l->return_per_unit < 0.0)
            throw ConfigError("economy: business parameters must be non-negative");
    }
    if (baseline_income < 0.0 || risk_premium < 0.0 || opportunity_wage < 0.0 ||
        parcel_quality_sigma < 0.0 || firewood_labor_cost_per_kg < 0.0 || leisure_f2e_factor < 0.0 ||
        f2e_noise_sigma < 0.0)
        throw ConfigError("economy: parameters must be non-negative");
    if (f2e_baseline < 0.0 || f2e_baseline > 1.0) throw ConfigError("economy: f2e_baseline must lie in [0, 1]");
}

BusinessSet HouseholdPlan::businesses() const {
    BusinessSet s;
    for (int b = 0; b < kBusinessCount; ++b)
        if (labor[b] > kEps) s.insert(static_cast<Business>(b));
    return s;
}

HouseholdPlan decide_production(const Household& h, const BusinessParams& params) {
    HouseholdPlan plan;
    const double free_land = std::max(0.0, h.land_mu - h.g2g_enrolled_mu);

    // Labor capacity and marginal return per labor unit for each line.
    std::array<double, kBusinessCount> capacity{};
    std::array<double, kBusinessCount> per_labor{};
    std::array<double, kBusinessCount> per_unit{};
    for (int b = 0; b < kBusinessCount; ++b) {
        const auto biz = static_cast<Business>(b);
        const BusinessLine& line = params.line(biz);
        double units_cap = line.unit_cap >= 0.0 ? line.unit_cap : std::numeric_limits<double>::infinity();
        double mult = 1.0;
        switch (biz) {
        case Business::Agriculture:
            if (line.land_per_unit > 0.0) units_cap = std::min(units_cap, free_land / line.land_per_unit);
            mult = h.productivity;
            break;
        case Business::TempJob: break;
        case Business::Lodging:
            if (!h.f2e_participant || h.capital < line.capital_threshold) units_cap = 0.0;
            units_cap = std::min(units_cap, static_cast<double>(h.rooms));
            break;
        }
        per_unit[b] = line.return_per_unit * mult;
        per_labor[b] = per_unit[b] / line.labor_per_unit;
        capacity[b] = units_cap * line.labor_per_unit;
    }

    double remaining = std::max(0.0, h.labor);
    while (remaining > kEps) {
        int best = -1;
        for (int b = 0; b < kBusinessCount; ++b) {
            if (capacity[b] - plan.labor[b] <= kEps || per_labor[b] <= 0.0) continue;
            if (best < 0 || per_labor[b] > per_labor[best]) best = b;
        }
        if (best < 0) break;
        const double chunk = std::min({1.0, remaining, capacity[best] - plan.labor[best]});
        plan.labor[best] += chunk;
        remaining -= chunk;
        plan.expected_income += chunk * per_labor[best];
        if (h.preference == Preference::LeisureMax && plan.expected_income >= params.baseline_income)
            break;
    }

    plan.expected_income = 0.0;
    for (int b = 0; b < kBusinessCount; ++b) {
        const BusinessLine& line = params.line(static_cast<Business>(b));
        plan.units[b] = plan.labor[b] / line.labor_per_unit;
        plan.income[b] = plan.units[b] * per_unit[b];
        plan.expected_income += plan.income[b];
    }
    plan.cultivated_mu = plan.units[static_cast<int>(Business::Agriculture)] *
                         params.agriculture.land_per_unit;
    return plan;
}

double agricultural_profit_per_mu(const Household& h, const BusinessParams& params) {
    const BusinessLine& ag = params.agriculture;
    const double per_unit =
        ag.return_per_unit * h.productivity - ag.labor_per_unit * params.opportunity_wage;
    const double mu_per_unit = ag.land_per_unit > 0.0 ? ag.land_per_unit : 1.0;
    return std::max(0.0, per_unit / mu_per_unit);
}

double decide_g2g_participation(const Household& h, double compensation, const BusinessParams& params,
                                Rng& rng) {
    if (compensation < 0.0) throw DomainError("g2g: compensation must be >= 0");
    const double enrolled = std::clamp(h.g2g_enrolled_mu, 0.0, h.land_mu);
    const double profit = agricultural_profit_per_mu(h, params);
    const double risk_factor = 1.0 + h.risk_attitude * params.risk_premium;
    const int draws = static_cast<int>(std::ceil(h.land_mu - kEps));

    double free = h.land_mu - enrolled;
    double added = 0.0;
    for (int k = 0; k < draws; ++k) {
        const double quality =
            std::clamp(lognormal(rng, 0.0, params.parcel_quality_sigma), 0.5, 1.5);
        if (free <= kEps) continue;
        const double parcel = std::min(1.0, free);
        free -= parcel;
        if (compensation > 0.0 && compensation >= profit * quality * risk_factor) added += parcel;
    }
    return std::min(h.land_mu, enrolled + added);
}

bool decide_f2e_participation(const Household& h, double price, const BusinessParams& params, Rng& rng) {
    if (!(price > 0.0) || price > kStandardElectricityPrice + 1e-12)
        throw DomainError("f2e: subsidized price must lie in (0, 0.65]");
    const double u = uniform01(rng);
    const double noise = lognormal(rng, 0.0, params.f2e_noise_sigma);
    if (h.f2e_participant) return true;
    if (u < params.f2e_baseline) return true;
    if (price >= kStandardElectricityPrice - 1e-12) return false;
    double draw = h.f2e_draw * noise * (1.0 - 0.3 * h.risk_attitude);
    if (h.preference == Preference::LeisureMax) draw *= params.leisure_f2e_factor;
    const double electricity_cost_per_kg = kKwhPerKgFirewood * price;
    return electricity_cost_per_kg <= params.firewood_labor_cost_per_kg * draw;
}

double household_income(const HouseholdPlan& plan, double compensation_received, double electricity_cost) {
    return plan.expected_income + compensation_received - electricity_cost;
}

}  // namespace pandasim
