#include "pandasim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pandasim/error.hpp"

namespace pandasim {

namespace {

void check_type(int type) {
    if (type < 1 || type > 3) throw DomainError("energy: household type must be 1, 2 or 3");
}

}  // namespace

double EnergyCoefficients::default_unit_scale() {
    return 6000.0 / std::pow(10.0, 6.069 + 0.205 + 0.050 + 0.009);
}

double EnergyCoefficients::tend_exponent(double type, double area, double rooms) const {
    return tend.constant + tend.household_type * type + tend.room_area * area + tend.rooms * rooms;
}

double EnergyCoefficients::teld_exponent(double type, double area, double lodging) const {
    return teld.constant + teld.room_area * area + teld.business_type * lodging +
           teld.household_type * type;
}

void EnergyCoefficients::validate() const {
    if (!(log_base > 1.0)) throw ConfigError("energy: log_base must be > 1");
    if (!(demand_unit_scale > 0.0)) throw ConfigError("energy: demand_unit_scale must be > 0");
    if (elasticity < 0.0) throw ConfigError("energy: elasticity must be >= 0");
}

double total_energy_demand(const EnergyInputs& in, const EnergyCoefficients& c) {
    check_type(in.household_type);
    return c.demand_unit_scale *
           std::pow(c.log_base, c.tend_exponent(in.household_type, in.room_area_units, in.rooms));
}

double total_electricity_demand(const EnergyInputs& in, double price, const EnergyCoefficients& c) {
    check_type(in.household_type);
    if (!(price > 0.0)) throw DomainError("energy: electricity price must be > 0");
    const double base =
        c.demand_unit_scale *
        std::pow(c.log_base, c.teld_exponent(in.household_type, in.room_area_units, in.lodging ? 1.0 : 0.0));
    const double demand = c.elasticity == 0.0
                              ? base
                              : base * std::pow(price / kStandardElectricityPrice, -c.elasticity);
    return std::min(demand, total_energy_demand(in, c));
}

std::pair<double, double> split_energy(double tend, double teld) {
    const double electricity = std::min(teld, tend);
    return {electricity, (tend - electricity) / kKwhPerKgFirewood};
}

double carbon_footprint(double firewood_kg, double electricity_kwh, const CarbonFactors& f) {
    return f.firewood * firewood_kg + f.electricity * electricity_kwh;
}

Expenditure energy_expenditure(double kwh, double subsidized_price, bool participant,
                               double standard_price) {
    if (!participant) return {kwh * standard_price, 0.0};
    return {kwh * subsidized_price, kwh * (standard_price - subsidized_price)};
}

EnergyProfile energy_profile(const EnergyInputs& in, double subsidized_price, bool participant,
                             const EnergyCoefficients& c) {
    const double price = participant ? subsidized_price : kStandardElectricityPrice;
    EnergyProfile p;
    p.tend_kwh_eq = total_energy_demand(in, c);
    const double teld = total_electricity_demand(in, price, c);
    std::tie(p.electricity_kwh, p.firewood_kg) = split_energy(p.tend_kwh_eq, teld);
    const auto spend = energy_expenditure(p.electricity_kwh, subsidized_price, participant);
    p.electricity_cost = spend.household_cost;
    p.subsidy_paid = spend.subsidy_paid;
    return p;
}

}  // namespace pandasim
