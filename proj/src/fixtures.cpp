#include "pandasim/fixtures.hpp"

#include <cmath>

namespace pandasim {

namespace {

struct Row {
    double price;
    double g2g;
    Label econ, carbon, habitat;
    double d_econ, d_carbon, d_habitat;  // offsets, fraction of the objective range
};

constexpr Label MM = Label::MinusMinus;
constexpr Label M = Label::Minus;
constexpr Label P = Label::Plus;
constexpr Label PP = Label::PlusPlus;

// clang-format off
constexpr Row kRows[] = {
    {0.35,  900, MM, PP, P,   0.00,  0.03,  0.02},
    {0.25,  600, MM, PP, M,   0.01,  0.01,  0.03},
    {0.20, 1800, MM, PP, PP,  0.03, -0.03,  0.03},
    {0.55,  400, M,  PP, MM,  0.03,  0.01,  0.02},
    {0.55, 1700, M,  P,  PP,  0.03, -0.03,  0.03},
    {0.25, 1700, M,  PP, PP,  0.01,  0.00, -0.01},
    {0.60, 1800, M,  PP, P,   0.02, -0.02,  0.01},
    {0.65, 2000, P,  PP, MM, -0.03,  0.03,  0.01},
    {0.55, 1800, P,  PP, P,  -0.03, -0.01,  0.00},
    {0.65, 1900, P,  P,  PP,  0.02,  0.01, -0.03},
    {0.55,  100, P,  P,  MM,  0.00,  0.03, -0.01},
    {0.40, 1900, P,  P,  PP, -0.02, -0.01,  0.02},
    {0.55,  200, P,  P,  MM,  0.03, -0.01,  0.03},
    {0.35, 2000, P,  M,  PP,  0.02, -0.03, -0.02},
    {0.20,    0, PP, P,  MM, -0.01,  0.00, -0.01},
    {0.35,    0, PP, P,  MM,  0.00,  0.03, -0.02},
    {0.35,  100, PP, MM, MM,  0.00,  0.00,  0.00},
    {0.65,    0, PP, MM, MM,  0.00,  0.00,  0.00},
};
// clang-format on

double position(Label l, double offset) { return (static_cast<int>(l) + 0.5) / 4.0 + offset; }

}  // namespace

std::vector<ParetoPoint> reference_frontier_fixture() {
    std::vector<ParetoPoint> out;
    for (const Row& r : kRows) {
        ParetoPoint p;
        p.scenario = PolicyScenario(r.g2g, r.price);
        p.objectives.gross_economic_benefits = 8.0e6 + 4.0e6 * position(r.econ, r.d_econ);
        p.objectives.carbon_kg = 2.6e6 - 4.0e5 * position(r.carbon, r.d_carbon);
        p.objectives.habitat_index = 6000.0 + 400.0 * position(r.habitat, r.d_habitat);
        const double area = 4000.0 * (1.0 - std::exp(-r.g2g / 800.0));
        const double electricity = 3.0e6 * std::pow(r.price / kStandardElectricityPrice, -0.8);
        p.direct.reverted_area_mu = area;
        p.direct.electricity_kwh = electricity;
        p.direct.g2g_expenditure = r.g2g * area;
        p.direct.f2e_subsidy = (kStandardElectricityPrice - r.price) * electricity;
        p.direct.financial_burden = p.direct.g2g_expenditure + p.direct.f2e_subsidy;
        out.push_back(p);
    }
    return out;
}

std::vector<LabelTriple> reference_frontier_labels() {
    std::vector<LabelTriple> out;
    for (const Row& r : kRows) {
        LabelTriple t{};
        t[static_cast<std::size_t>(Objective::Carbon)] = r.carbon;
        t[static_cast<std::size_t>(Objective::Habitat)] = r.habitat;
        t[static_cast<std::size_t>(Objective::Econ)] = r.econ;
        out.push_back(t);
    }
    return out;
}

}  // namespace pandasim
