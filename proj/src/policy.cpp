#include "pandasim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pandasim/error.hpp"

namespace pandasim {

namespace {

double snap(double v) { return std::round(v * 1e6) / 1e6; }

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenarios: cannot parse number '" + s + "' in '" + context + "'");
    }
}

}  // namespace

PolicyScenario::PolicyScenario(double g2g, double price) : g2g_compensation(snap(g2g)), f2e_price(snap(price)) {}

bool PolicyScenario::is_null() const {
    return g2g_compensation == 0.0 && f2e_price >= kStandardElectricityPrice;
}

std::string PolicyScenario::id() const {
    return "g2g=" + format_number(g2g_compensation) + ",f2e=" + format_number(f2e_price);
}

bool operator<(const PolicyScenario& a, const PolicyScenario& b) {
    if (a.g2g_compensation != b.g2g_compensation) return a.g2g_compensation < b.g2g_compensation;
    return a.f2e_price > b.f2e_price;
}

std::vector<double> Lattice::values() const {
    std::vector<double> out;
    const long count = static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(snap(min + static_cast<double>(k) * step));
    return out;
}

void Lattice::validate(const char* name) const {
    if (!(step > 0.0)) throw ConfigError(std::string("scenarios: ") + name + " step must be > 0");
    if (max < min) throw ConfigError(std::string("scenarios: ") + name + " max must be >= min");
}

void ScenarioLattices::validate() const {
    g2g.validate("g2g");
    f2e.validate("f2e");
    if (g2g.min < 0.0) throw ConfigError("scenarios: g2g compensation must be >= 0");
    if (!(f2e.min > 0.0) || f2e.max > kStandardElectricityPrice + 1e-9)
        throw ConfigError("scenarios: f2e prices must lie in (0, 0.65]");
}

std::vector<PolicyScenario> scenario_grid(const ScenarioLattices& lattices) {
    lattices.validate();
    auto prices = lattices.f2e.values();
    std::sort(prices.begin(), prices.end(), std::greater<>());
    std::vector<PolicyScenario> grid;
    for (double g : lattices.g2g.values())
        for (double p : prices) grid.emplace_back(g, p);
    return grid;
}

ScenarioLattices parse_scenario_spec(const std::string& spec, const ScenarioLattices& defaults) {
    ScenarioLattices out = defaults;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError("scenarios: expected axis=values in '" + part + "'");
        const std::string axis = part.substr(0, eq);
        const std::string value = part.substr(eq + 1);
        Lattice lat;
        const auto dots = value.find("..");
        if (dots != std::string::npos) {
            const auto colon = value.find(':', dots);
            if (colon == std::string::npos) throw ConfigError("scenarios: range needs ':step' in '" + part + "'");
            lat.min = parse_double(value.substr(0, dots), part);
            lat.max = parse_double(value.substr(dots + 2, colon - dots - 2), part);
            lat.step = parse_double(value.substr(colon + 1), part);
        } else if (value.find('|') != std::string::npos) {
            throw ConfigError("scenarios: value lists are not lattices; use a range in '" + part + "'");
        } else {
            lat.min = lat.max = parse_double(value, part);
            lat.step = 1.0;
        }
        if (axis == "g2g") out.g2g = lat;
        else if (axis == "f2e") out.f2e = lat;
        else throw ConfigError("scenarios: unknown axis '" + axis + "'");
    }
    out.validate();
    return out;
}

PolicyLedger settle_year(const std::vector<Household>& households, const PolicyScenario& scenario,
                         const std::vector<EnergyProfile>& profiles) {
    PolicyLedger ledger;
    double enrolled = 0.0;
    for (const auto& h : households) enrolled += h.g2g_enrolled_mu;
    ledger.g2g_expenditure = scenario.g2g_compensation * enrolled;
    for (const auto& p : profiles) ledger.f2e_subsidy += p.subsidy_paid;
    ledger.financial_burden = ledger.g2g_expenditure + ledger.f2e_subsidy;
    return ledger;
}

}  // namespace pandasim
