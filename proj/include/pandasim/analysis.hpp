#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pandasim/engine.hpp"
#include "pandasim/policy.hpp"

namespace pandasim {

// ---------------------------------------------------------------------------
// Objectives and Pareto frontier

/// Index order used for labels, weights and score breakdowns.
enum class Objective { Carbon = 0, Habitat = 1, Econ = 2 };
inline constexpr std::array<Objective, 3> kObjectives{Objective::Carbon, Objective::Habitat, Objective::Econ};
const char* objective_name(Objective o);

/// Carbon is minimized, habitat and benefits are maximized. Values are stored as is.
struct ObjectiveTriple {
    double carbon_kg = 0.0;
    double habitat_index = 0.0;
    double gross_economic_benefits = 0.0;

    double value(Objective o) const;
    /// Larger is better for every objective (carbon negated).
    double goodness(Objective o) const;
};

struct DirectBenefits {
    double reverted_area_mu = 0.0;  // X1
    double electricity_kwh = 0.0;   // X2
    double financial_burden = 0.0;
    double g2g_expenditure = 0.0;
    double f2e_subsidy = 0.0;
};

struct ParetoPoint {
    PolicyScenario scenario;
    ObjectiveTriple objectives;
    DirectBenefits direct;
};

/// At least as good everywhere and strictly better somewhere.
bool dominates(const ObjectiveTriple& p, const ObjectiveTriple& q);

/// Non-dominated members in input order; equal triples are all kept. Throws DomainError on empty input.
std::vector<ParetoPoint> pareto_frontier(const std::vector<ParetoPoint>& points);
/// Same decision per input point.
std::vector<bool> frontier_mask(const std::vector<ParetoPoint>& points);

/// Reference-year means of every scenario in a sweep.
std::vector<ParetoPoint> reference_points(const SweepResult& sweep);
ParetoPoint reference_point(const ScenarioResult& result);

// ---------------------------------------------------------------------------
// Quartile labels

enum class Label { MinusMinus = 0, Minus = 1, Plus = 2, PlusPlus = 3 };
const char* label_text(Label l);
using LabelTriple = std::array<Label, 3>;  // indexed by Objective

/// Four equal-width bins over each objective's range on the frontier, '++' the best.
std::vector<LabelTriple> quartile_labels(const std::vector<ParetoPoint>& frontier);

// ---------------------------------------------------------------------------
// Surrogates

enum class SurrogateForm {
    G2GBudget,          // a*exp(b*X1) + c
    F2EBudget,          // a*X2^2 + b*X1 + c
    F2EBudgetLinearX2,  // a*X2^2 + b*X2 + c
    HabitatCubic,       // full cubic in (X1, X2), b0..b9
    HabitatQuadratic,   // full quadratic, b0..b5
    EconQuadratic,      // full quadratic, b0..b5
};
const char* form_name(SurrogateForm f);
SurrogateForm parse_form(const std::string& name);
std::size_t coefficient_count(SurrogateForm f);
bool is_polynomial(SurrogateForm f);

/// X1 = (x1 - x1_center) / x1_scale and likewise for X2. Budget forms keep raw units.
struct FittedSurrogate {
    SurrogateForm form = SurrogateForm::G2GBudget;
    std::vector<double> coefficients;
    double train_r2 = 0.0;
    double test_r2 = 0.0;
    double x1_center = 0.0;
    double x1_scale = 1.0;
    double x2_center = 0.0;
    double x2_scale = 1.0;
};

double eval_surrogate(const FittedSurrogate& model, double x1, double x2);

struct Sample {
    double x1 = 0.0;
    double x2 = 0.0;
    double y = 0.0;
};

struct FitOptions {
    std::uint64_t seed = 20240;
    double train_fraction = 0.8;
    bool standardize = true;  // polynomial forms only
};

/// 1 - SSres/SStot, 0 when SStot is 0.
double r_squared(const std::vector<double>& y, const std::vector<double>& fitted);

/// Least squares on a seeded 80/20 split. Needs at least twice as many samples as
/// coefficients. Throws FitError on a singular design or non-finite data.
FittedSurrogate fit_surrogate(const std::vector<Sample>& samples, SurrogateForm form, const FitOptions& options = {});

// ---------------------------------------------------------------------------
// Curves

struct CurvePoint {
    double x1 = 0.0;
    double x2 = 0.0;
    int branch = 0;
};

/// For each x2, an x1 in [0, x1_max] with B_g2g(x1) + B_f2e(x1, x2) = total_budget.
std::vector<CurvePoint> budget_line(double total_budget, const FittedSurrogate& g2g_model,
                                   const FittedSurrogate& f2e_model, const std::vector<double>& x2_grid,
                                   double x1_max);

/// Every x1 in [x1_min, x1_max] with model(x1, x2) = level, per x2 in the grid.
/// Branches are numbered by ascending x1 within each x2.
std::vector<CurvePoint> indifference_curve(const FittedSurrogate& model, double level,
                                           const std::vector<double>& x2_grid, double x1_min, double x1_max);

/// Reference-year indicator along one lattice axis.
struct EfficiencyPoint {
    double level = 0.0;    // compensation or subsidized price
    double benefit = 0.0;  // direct benefit
    double cost = 0.0;     // program expenditure
    double ratio = 0.0;    // benefit per CNY, 0 when cost is 0
};

/// G2G column (price fixed, default 0.65): benefit = reverted Mu, cost = G2G expenditure.
std::vector<EfficiencyPoint> g2g_efficiency(const SweepResult& sweep, double f2e_price = kStandardElectricityPrice);
/// F2E row (compensation fixed, default 0): benefit = firewood avoided relative to the
/// unsubsidized scenario of the row, cost = F2E subsidy.
std::vector<EfficiencyPoint> f2e_efficiency(const SweepResult& sweep, double g2g_compensation = 0.0);

// ---------------------------------------------------------------------------
// Posterior selection

struct PosteriorQuery {
    double budget_cap = std::numeric_limits<double>::infinity();
    double min_reverted_area_mu = 0.0;
    std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};  // carbon, habitat, econ

    void validate() const;
};

struct RankedPoint {
    ParetoPoint point;
    double score = 0.0;
    std::array<double, 3> normalized{};  // per objective, 1 = best survivor
    std::array<double, 3> weighted{};
};

/// Filter by budget cap and minimum area, then rank by the weighted sum of min-max
/// normalized objectives. Ties go to the lower burden, then (g2g, price) ascending.
std::vector<RankedPoint> posterior_select(const std::vector<ParetoPoint>& frontier, const PosteriorQuery& query);

}  // namespace pandasim
