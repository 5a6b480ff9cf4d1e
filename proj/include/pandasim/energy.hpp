#pragma once

#include <utility>

namespace pandasim {

inline constexpr double kStandardElectricityPrice = 0.65;  // CNY/kWh, unsubsidized
inline constexpr double kKwhPerKgFirewood = 2.25;

/// Log-linear household demand regressions. Defaults are the published survey fits.
struct EnergyCoefficients {
    struct Tend {
        double constant = 6.069;
        double household_type = 0.205;
        double room_area = 0.050;
        double rooms = 0.009;
    } tend;
    struct Teld {
        double constant = 5.684;
        double room_area = 0.072;
        double business_type = 0.447;  // lodging involvement indicator
        double household_type = 0.216;
    } teld;
    double log_base = 10.0;
    /// Model units -> kWh-equivalent per year; default puts a type-1 household with one
    /// room of 100 m^2 at 6,000 kWh-eq.
    double demand_unit_scale = default_unit_scale();
    double elasticity = 0.8;

    static double default_unit_scale();
    double tend_exponent(double type, double room_area_units, double rooms) const;
    double teld_exponent(double type, double room_area_units, double lodging) const;
    void validate() const;
};

struct CarbonFactors {
    double firewood = 1.4375;  // kg CO2 per kg
    double electricity = 0.96; // kg CO2 per kWh
};

struct EnergyInputs {
    int household_type = 1;        // 1, 2, 3
    double room_area_units = 1.0;  // hundreds of m^2
    int rooms = 1;
    bool lodging = false;
};

struct EnergyProfile {
    double tend_kwh_eq = 0.0;
    double electricity_kwh = 0.0;
    double firewood_kg = 0.0;
    double electricity_cost = 0.0;
    double subsidy_paid = 0.0;
};

struct Expenditure {
    double household_cost = 0.0;
    double subsidy_paid = 0.0;
};

/// scale * base^(c0 + c1*type + c2*area + c3*rooms). Throws DomainError for a type
/// outside {1, 2, 3}.
double total_energy_demand(const EnergyInputs& in, const EnergyCoefficients& c);

/// Base electricity demand times (price / 0.65)^(-elasticity), capped at total demand.
/// Throws DomainError for price <= 0 or a type outside {1, 2, 3}.
double total_electricity_demand(const EnergyInputs& in, double price, const EnergyCoefficients& c);

/// Electricity covers min(teld, tend); the rest is firewood at 2.25 kWh per kg.
std::pair<double, double> split_energy(double tend, double teld);

double carbon_footprint(double firewood_kg, double electricity_kwh, const CarbonFactors& f = {});

Expenditure energy_expenditure(double electricity_kwh, double subsidized_price, bool participant,
                               double standard_price = kStandardElectricityPrice);

/// Full profile for one household-year. Participants face the subsidized price,
/// everyone else the standard price.
EnergyProfile energy_profile(const EnergyInputs& in, double subsidized_price, bool participant,
                             const EnergyCoefficients& c);

}  // namespace pandasim
