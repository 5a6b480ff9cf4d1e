#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pandasim/analysis.hpp"
#include "pandasim/config.hpp"

namespace pandasim {

/// A fitted model or the reason it could not be fitted.
struct SurrogateSlot {
    std::string role;  // g2g_budget, f2e_budget, habitat, econ
    SurrogateForm form = SurrogateForm::G2GBudget;
    std::optional<FittedSurrogate> model;
    std::string error;
};

struct AnalysisResult {
    std::vector<ParetoPoint> points;  // every scenario, input order
    std::vector<bool> frontier_mask;
    std::vector<ParetoPoint> frontier;  // mask applied, input order
    std::vector<LabelTriple> labels;    // per frontier point
    std::vector<SurrogateSlot> surrogates;

    const SurrogateSlot* surrogate(const std::string& role) const;
};

/// Frontier, labels and the four surrogate fits over reference-year points.
AnalysisResult analyze_points(const std::vector<ParetoPoint>& points, const AnalysisConfig& config);

nlohmann::ordered_json pareto_point_json(const ParetoPoint& p);
nlohmann::ordered_json surrogate_json(const FittedSurrogate& m);
FittedSurrogate surrogate_from_json(const nlohmann::json& j);

nlohmann::ordered_json frontier_json(const AnalysisResult& a);
nlohmann::ordered_json surrogates_json(const AnalysisResult& a);
/// econ,carbon,habitat label columns per frontier point.
std::string labels_csv(const AnalysisResult& a);
/// Budget line, target line, indifference curves and cost-efficiency series.
nlohmann::ordered_json curves_json(const AnalysisResult& a, const SweepResult* sweep, const PosteriorQuery& query);
nlohmann::ordered_json ranking_json(const std::vector<RankedPoint>& ranked);
/// Plain-text recommendation table.
std::string ranking_table(const std::vector<RankedPoint>& ranked, std::size_t max_rows = 10);

/// The bundle query defaults: 5e6 CNY cap, 2,500 Mu, weights 0.4/0.4/0.2.
PosteriorQuery default_bundle_query();

inline constexpr const char* kBundleSchemaVersion = "1.0";

struct BundleInfo {
    std::string version = kVersion;
    std::string config_hash;
    int reference_year = 0;
    ScenarioLattices lattices;
    PosteriorQuery defaults = default_bundle_query();
};

nlohmann::ordered_json explorer_bundle(const AnalysisResult& a, const BundleInfo& info);

/// Bundle points and query parsed back, for round-trip checks.
struct ParsedBundle {
    std::vector<ParetoPoint> points;
    std::vector<bool> frontier;
    PosteriorQuery defaults;
};
ParsedBundle parse_bundle(const nlohmann::json& bundle);

}  // namespace pandasim
