#include "pandasim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pandasim/error.hpp"

namespace pandasim {

using Json = nlohmann::ordered_json;

namespace {

const char* const kRoles[] = {"g2g_budget", "f2e_budget", "habitat", "econ"};

std::vector<Sample> samples_for(const std::string& role, const std::vector<ParetoPoint>& points) {
    std::vector<Sample> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        Sample s{p.direct.reverted_area_mu, p.direct.electricity_kwh, 0.0};
        if (role == "g2g_budget") s.y = p.direct.g2g_expenditure;
        else if (role == "f2e_budget") s.y = p.direct.f2e_subsidy;
        else if (role == "habitat") s.y = p.objectives.habitat_index;
        else s.y = p.objectives.gross_economic_benefits;
        out.push_back(s);
    }
    return out;
}

Json weights_json(const std::array<double, 3>& w) {
    Json j;
    for (Objective o : kObjectives) j[objective_name(o)] = w[static_cast<std::size_t>(o)];
    return j;
}

Json query_json(const PosteriorQuery& q) {
    Json j;
    j["budget_cap"] = std::isfinite(q.budget_cap) ? Json(q.budget_cap) : Json(nullptr);
    j["min_reverted_area_mu"] = q.min_reverted_area_mu;
    j["weights"] = weights_json(q.weights);
    return j;
}

Json labels_object(const LabelTriple& t) {
    Json j;
    j["econ"] = label_text(t[static_cast<std::size_t>(Objective::Econ)]);
    j["carbon"] = label_text(t[static_cast<std::size_t>(Objective::Carbon)]);
    j["habitat"] = label_text(t[static_cast<std::size_t>(Objective::Habitat)]);
    return j;
}

Json curve_json(const std::vector<CurvePoint>& curve) {
    Json arr = Json::array();
    for (const auto& c : curve) arr.push_back({{"x1", c.x1}, {"x2", c.x2}, {"branch", c.branch}});
    return arr;
}

Json lattice_json(const Lattice& l) { return {{"min", l.min}, {"max", l.max}, {"step", l.step}}; }

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> out;
    if (!(hi > lo)) return {lo};
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, v.size() - 1);
    return v[i] + (v[j] - v[i]) * (pos - static_cast<double>(i));
}

}  // namespace

const SurrogateSlot* AnalysisResult::surrogate(const std::string& role) const {
    for (const auto& s : surrogates)
        if (s.role == role) return &s;
    return nullptr;
}

AnalysisResult analyze_points(const std::vector<ParetoPoint>& points, const AnalysisConfig& config) {
    AnalysisResult a;
    a.points = points;
    a.frontier_mask = frontier_mask(points);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (a.frontier_mask[i]) a.frontier.push_back(points[i]);
    a.labels = quartile_labels(a.frontier);

    const SurrogateForm forms[] = {SurrogateForm::G2GBudget, config.f2e_surrogate(), config.habitat_surrogate(),
                                   SurrogateForm::EconQuadratic};
    FitOptions options;
    options.seed = config.fit_seed;
    for (std::size_t k = 0; k < 4; ++k) {
        SurrogateSlot slot;
        slot.role = kRoles[k];
        slot.form = forms[k];
        try {
            slot.model = fit_surrogate(samples_for(slot.role, points), slot.form, options);
        } catch (const FitError& e) {
            slot.error = e.what();
        }
        a.surrogates.push_back(std::move(slot));
    }
    return a;
}

Json pareto_point_json(const ParetoPoint& p) {
    Json j;
    j["id"] = p.scenario.id();
    j["g2g"] = p.scenario.g2g_compensation;
    j["f2e"] = p.scenario.f2e_price;
    j["objectives"] = {{"carbon_kg", p.objectives.carbon_kg},
                       {"habitat_index", p.objectives.habitat_index},
                       {"gross_economic_benefits", p.objectives.gross_economic_benefits}};
    j["direct"] = {{"reverted_area_mu", p.direct.reverted_area_mu},
                   {"electricity_kwh", p.direct.electricity_kwh},
                   {"financial_burden", p.direct.financial_burden},
                   {"g2g_expenditure", p.direct.g2g_expenditure},
                   {"f2e_subsidy", p.direct.f2e_subsidy}};
    return j;
}

Json surrogate_json(const FittedSurrogate& m) {
    Json j;
    j["form"] = form_name(m.form);
    j["coefficients"] = m.coefficients;
    j["train_r2"] = m.train_r2;
    j["test_r2"] = m.test_r2;
    j["x1_center"] = m.x1_center;
    j["x1_scale"] = m.x1_scale;
    j["x2_center"] = m.x2_center;
    j["x2_scale"] = m.x2_scale;
    return j;
}

FittedSurrogate surrogate_from_json(const nlohmann::json& j) {
    FittedSurrogate m;
    m.form = parse_form(j.at("form").get<std::string>());
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.train_r2 = j.value("train_r2", 0.0);
    m.test_r2 = j.value("test_r2", 0.0);
    m.x1_center = j.value("x1_center", 0.0);
    m.x1_scale = j.value("x1_scale", 1.0);
    m.x2_center = j.value("x2_center", 0.0);
    m.x2_scale = j.value("x2_scale", 1.0);
    if (m.coefficients.size() != coefficient_count(m.form)) throw DomainError("surrogate: wrong coefficient count");
    return m;
}

Json frontier_json(const AnalysisResult& a) {
    Json j;
    j["n_points"] = a.points.size();
    j["n_frontier"] = a.frontier.size();
    Json arr = Json::array();
    for (std::size_t i = 0; i < a.frontier.size(); ++i) {
        Json p = pareto_point_json(a.frontier[i]);
        p["labels"] = labels_object(a.labels[i]);
        arr.push_back(std::move(p));
    }
    j["frontier"] = std::move(arr);
    return j;
}

Json surrogates_json(const AnalysisResult& a) {
    Json j = Json::object();
    for (const auto& s : a.surrogates) {
        if (s.model) {
            j[s.role] = surrogate_json(*s.model);
        } else {
            j[s.role] = {{"form", form_name(s.form)}, {"error", s.error}};
        }
    }
    return j;
}

std::string labels_csv(const AnalysisResult& a) {
    std::ostringstream out;
    out << "scenario_id,g2g,f2e,econ,carbon,habitat\n";
    for (std::size_t i = 0; i < a.frontier.size(); ++i) {
        const auto& p = a.frontier[i];
        const auto& t = a.labels[i];
        out << '"' << p.scenario.id() << "\"," << p.scenario.g2g_compensation << ',' << p.scenario.f2e_price << ','
            << label_text(t[static_cast<std::size_t>(Objective::Econ)]) << ','
            << label_text(t[static_cast<std::size_t>(Objective::Carbon)]) << ','
            << label_text(t[static_cast<std::size_t>(Objective::Habitat)]) << '\n';
    }
    return out.str();
}

Json curves_json(const AnalysisResult& a, const SweepResult* sweep, const PosteriorQuery& query) {
    Json j;
    double x1_max = 0.0;
    double x2_lo = std::numeric_limits<double>::infinity();
    double x2_hi = -x2_lo;
    for (const auto& p : a.points) {
        x1_max = std::max(x1_max, p.direct.reverted_area_mu);
        x2_lo = std::min(x2_lo, p.direct.electricity_kwh);
        x2_hi = std::max(x2_hi, p.direct.electricity_kwh);
    }
    x1_max = x1_max > 0.0 ? 1.1 * x1_max : 1.0;
    const auto x2_grid = grid(x2_lo, x2_hi, 41);
    j["domain"] = {{"x1_min", 0.0}, {"x1_max", x1_max}, {"x2_min", x2_lo}, {"x2_max", x2_hi}};
    j["target_line"] = {{"x1", query.min_reverted_area_mu}};

    const auto* g2g = a.surrogate("g2g_budget");
    const auto* f2e = a.surrogate("f2e_budget");
    const double budget = std::isfinite(query.budget_cap) ? query.budget_cap : default_bundle_query().budget_cap;
    if (g2g && g2g->model && f2e && f2e->model)
        j["budget_line"] = {{"budget", budget}, {"points", curve_json(budget_line(budget, *g2g->model, *f2e->model, x2_grid, x1_max))}};
    else
        j["budget_line"] = nullptr;

    Json indiff = Json::array();
    for (const char* role : {"habitat", "econ"}) {
        const auto* s = a.surrogate(role);
        if (!s || !s->model || a.frontier.empty()) continue;
        std::vector<double> values;
        for (const auto& p : a.frontier)
            values.push_back(std::string(role) == "habitat" ? p.objectives.habitat_index
                                                            : p.objectives.gross_economic_benefits);
        for (double q : {0.25, 0.5, 0.75}) {
            const double level = quantile(values, q);
            indiff.push_back({{"model", role},
                              {"quantile", q},
                              {"level", level},
                              {"points", curve_json(indifference_curve(*s->model, level, x2_grid, 0.0, x1_max))}});
        }
    }
    j["indifference_curves"] = std::move(indiff);

    if (sweep) {
        Json g = Json::array();
        for (const auto& e : g2g_efficiency(*sweep))
            g.push_back({{"g2g", e.level}, {"reverted_area_mu", e.benefit}, {"g2g_expenditure", e.cost}, {"mu_per_cny", e.ratio}});
        Json f = Json::array();
        for (const auto& e : f2e_efficiency(*sweep))
            f.push_back({{"f2e", e.level}, {"firewood_avoided_kg", e.benefit}, {"f2e_subsidy", e.cost}, {"kg_per_cny", e.ratio}});
        j["g2g_efficiency"] = std::move(g);
        j["f2e_efficiency"] = std::move(f);
    }
    return j;
}

Json ranking_json(const std::vector<RankedPoint>& ranked) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& r = ranked[i];
        Json j = pareto_point_json(r.point);
        j["rank"] = i + 1;
        j["score"] = r.score;
        j["normalized"] = weights_json(r.normalized);
        j["weighted"] = weights_json(r.weighted);
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string ranking_table(const std::vector<RankedPoint>& ranked, std::size_t max_rows) {
    std::ostringstream out;
    if (ranked.empty()) {
        out << "no feasible scenario for this query\n";
        return out.str();
    }
    char line[256];
    std::snprintf(line, sizeof line, "%4s  %-22s %8s %7s %7s %7s %14s %12s\n", "rank", "scenario", "score", "carbon",
                  "habitat", "econ", "burden_cny", "area_mu");
    out << line;
    for (std::size_t i = 0; i < ranked.size() && i < max_rows; ++i) {
        const auto& r = ranked[i];
        std::snprintf(line, sizeof line, "%4zu  %-22s %8.4f %7.3f %7.3f %7.3f %14.1f %12.1f\n", i + 1,
                      r.point.scenario.id().c_str(), r.score, r.normalized[0], r.normalized[1], r.normalized[2],
                      r.point.direct.financial_burden, r.point.direct.reverted_area_mu);
        out << line;
    }
    return out.str();
}

PosteriorQuery default_bundle_query() {
    PosteriorQuery q;
    q.budget_cap = 5.0e6;
    q.min_reverted_area_mu = 2500.0;
    q.weights = {0.4, 0.4, 0.2};
    return q;
}

Json explorer_bundle(const AnalysisResult& a, const BundleInfo& info) {
    Json j;
    j["schema_version"] = kBundleSchemaVersion;
    j["version"] = info.version;
    j["config_hash"] = info.config_hash;
    j["reference_year"] = info.reference_year;
    j["lattices"] = {{"g2g", lattice_json(info.lattices.g2g)}, {"f2e", lattice_json(info.lattices.f2e)}};
    j["defaults"] = query_json(info.defaults);
    Json pts = Json::array();
    std::size_t f = 0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        Json p = pareto_point_json(a.points[i]);
        p["frontier"] = static_cast<bool>(a.frontier_mask[i]);
        p["labels"] = a.frontier_mask[i] ? labels_object(a.labels[f++]) : Json(nullptr);
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    j["surrogates"] = surrogates_json(a);
    return j;
}

ParsedBundle parse_bundle(const nlohmann::json& b) {
    ParsedBundle out;
    for (const auto& p : b.at("points")) {
        ParetoPoint pt;
        pt.scenario = PolicyScenario(p.at("g2g").get<double>(), p.at("f2e").get<double>());
        const auto& o = p.at("objectives");
        pt.objectives = {o.at("carbon_kg").get<double>(), o.at("habitat_index").get<double>(),
                         o.at("gross_economic_benefits").get<double>()};
        const auto& d = p.at("direct");
        pt.direct.reverted_area_mu = d.at("reverted_area_mu").get<double>();
        pt.direct.electricity_kwh = d.at("electricity_kwh").get<double>();
        pt.direct.financial_burden = d.at("financial_burden").get<double>();
        pt.direct.g2g_expenditure = d.value("g2g_expenditure", 0.0);
        pt.direct.f2e_subsidy = d.value("f2e_subsidy", 0.0);
        out.points.push_back(pt);
        out.frontier.push_back(p.at("frontier").get<bool>());
    }
    const auto& d = b.at("defaults");
    out.defaults.budget_cap = d.at("budget_cap").is_null() ? std::numeric_limits<double>::infinity()
                                                           : d.at("budget_cap").get<double>();
    out.defaults.min_reverted_area_mu = d.at("min_reverted_area_mu").get<double>();
    const auto& w = d.at("weights");
    out.defaults.weights = {w.at("carbon").get<double>(), w.at("habitat").get<double>(), w.at("econ").get<double>()};
    return out;
}

}  // namespace pandasim
