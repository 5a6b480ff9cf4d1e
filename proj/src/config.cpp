#include "pandasim/config.hpp"

#include <cstdio>
#include <fstream>
#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>
#include <type_traits>

#include "pandasim/error.hpp"

namespace pandasim {

using Json = nlohmann::ordered_json;

namespace {

const char* const kCoverKeys[kCoverCount] = {"farmland", "grassland", "shrub", "forest",
                                             "bamboo",   "water",     "builtup", "bare"};
const char* const kFactorKeys[kHabitatFactors] = {"slope",         "stream_proximity",  "land_cover", "bamboo",
                                                  "road_distance", "farmland_distance", "settlement_distance"};

/// Fixed-size array stored as an object with one key per slot.
template <std::size_t N>
struct Keyed {
    std::array<double, N>& values;
    const char* const* keys;
};

// Field lists shared by the reader and the writer.

template <class V>
void visit(V& v, SuitabilityParams& p) {
    v("slope_full", p.slope_full);
    v("slope_zero", p.slope_zero);
    v("distance_radius", p.distance_radius);
    v("stream_peak", p.stream_peak);
    v("stream_zero", p.stream_zero);
    v("bamboo_radius", p.bamboo_radius);
    v("cover", Keyed<kCoverCount>{p.cover, kCoverKeys});
    v("disturbance_penalty", p.disturbance_penalty);
    v("disturbance_window", p.disturbance_window);
}

template <class V>
void visit(V& v, WorldConfig& w) {
    v("width", w.width);
    v("height", w.height);
    v("fractions", Keyed<kCoverCount>{w.fractions, kCoverKeys});
    v("settlements", w.settlements);
    v("settlement_radius", w.settlement_radius);
    v("slope_smoothing", w.slope_smoothing);
    v("grass_dwell", w.grass_dwell);
    v("shrub_dwell", w.shrub_dwell);
    v("forest_stock_kg", w.forest_stock_kg);
    v("shrub_stock_kg", w.shrub_stock_kg);
    v("suitability", w.suitability);
}

template <class V>
void visit(V& v, DemographyRates& d) {
    v("birth_rate", d.birth_rate);
    v("death_rate_young", d.death_rate_young);
    v("death_rate_old", d.death_rate_old);
    v("death_age_band", d.death_age_band);
    v("marriage_rate", d.marriage_rate);
    v("out_migration_rate", d.out_migration_rate);
}

template <class V>
void visit(V& v, HouseholdTraits& t) {
    v("profit_max_share", t.profit_max_share);
    v("productivity_sigma", t.productivity_sigma);
    v("f2e_draw_sigma", t.f2e_draw_sigma);
    v("capital_median", t.capital_median);
    v("capital_sigma", t.capital_sigma);
    v("rooms_min", t.rooms_min);
    v("rooms_max", t.rooms_max);
    v("room_area_min", t.room_area_min);
    v("room_area_max", t.room_area_max);
    v("land_min_mu", t.land_min_mu);
    v("land_max_mu", t.land_max_mu);
}

template <class V>
void visit(V& v, BusinessLine& b) {
    v("labor_per_unit", b.labor_per_unit);
    v("land_per_unit", b.land_per_unit);
    v("capital_threshold", b.capital_threshold);
    v("return_per_unit", b.return_per_unit);
    v("unit_cap", b.unit_cap);
}

template <class V>
void visit(V& v, BusinessParams& b) {
    v("agriculture", b.agriculture);
    v("temp_job", b.temp_job);
    v("lodging", b.lodging);
    v("baseline_income", b.baseline_income);
    v("risk_premium", b.risk_premium);
    v("opportunity_wage", b.opportunity_wage);
    v("parcel_quality_sigma", b.parcel_quality_sigma);
    v("firewood_labor_cost_per_kg", b.firewood_labor_cost_per_kg);
    v("leisure_f2e_factor", b.leisure_f2e_factor);
    v("f2e_noise_sigma", b.f2e_noise_sigma);
    v("f2e_baseline", b.f2e_baseline);
}

template <class V>
void visit(V& v, EnergyCoefficients::Tend& t) {
    v("constant", t.constant);
    v("household_type", t.household_type);
    v("room_area", t.room_area);
    v("rooms", t.rooms);
}

template <class V>
void visit(V& v, EnergyCoefficients::Teld& t) {
    v("constant", t.constant);
    v("room_area", t.room_area);
    v("business_type", t.business_type);
    v("household_type", t.household_type);
}

template <class V>
void visit(V& v, EnergyCoefficients& e) {
    v("tend", e.tend);
    v("teld", e.teld);
    v("log_base", e.log_base);
    v("demand_unit_scale", e.demand_unit_scale);
    v("elasticity", e.elasticity);
}

template <class V>
void visit(V& v, CarbonFactors& c) {
    v("firewood", c.firewood);
    v("electricity", c.electricity);
}

template <class V>
void visit(V& v, FirewoodParams& f) {
    v("block_size", f.block_size);
    v("threshold_kg", f.threshold_kg);
    v("slope_cost", f.slope_cost);
    v("goal_bias", f.goal_bias);
    v("visited_damping", f.visited_damping);
    v("max_steps", f.max_steps);
    v("disturb_path_cells", f.disturb_path_cells);
    v("replenish_period", f.replenish_period);
}

template <class V>
void visit(V& v, Lattice& l) {
    v("min", l.min);
    v("max", l.max);
    v("step", l.step);
}

template <class V>
void visit(V& v, ScenarioLattices& s) {
    v("g2g", s.g2g);
    v("f2e", s.f2e);
}

template <class V>
void visit(V& v, AnalysisConfig& a) {
    v("f2e_budget_uses_x2_linear", a.f2e_budget_uses_x2_linear);
    v("habitat_form", a.habitat_form);
    v("fit_seed", a.fit_seed);
}

/// Top-level simulation scalars, kept apart from the nested sections.
struct SimulationSection {
    SimConfig& sim;
};

template <class V>
void visit(V& v, SimulationSection& s) {
    v("households", s.sim.households);
    v("start_year", s.sim.start_year);
    v("years", s.sim.years);
    v("savings_rate", s.sim.savings_rate);
    v("independent_scenario_seeds", s.sim.independent_scenario_seeds);
}

template <class V>
void visit(V& v, RunConfig& c) {
    v("n_replicates", c.n_replicates);
    v("base_seed", c.base_seed);
    v("output_dir", c.output_dir);
    v("scenarios", c.scenarios);
    SimulationSection sim{c.sim};
    v("simulation", sim);
    v("world", c.sim.world);
    v("habitat_weights", Keyed<kHabitatFactors>{c.sim.habitat_weights.w, kFactorKeys});
    v("demography", c.sim.demography);
    v("traits", c.sim.traits);
    v("economy", c.sim.economy);
    v("energy", c.sim.energy);
    v("carbon", c.sim.carbon);
    v("firewood", c.sim.firewood);
    v("analysis", c.analysis);
}

template <class T>
constexpr bool is_scalar_field = std::is_arithmetic_v<T> || std::is_same_v<T, std::string>;

class Writer {
public:
    explicit Writer(Json& out) : out_(out) {}

    template <class T>
    void operator()(const char* key, T& value) {
        if constexpr (is_scalar_field<T>) {
            out_[key] = value;
        } else {
            Json sub = Json::object();
            Writer w(sub);
            visit(w, value);
            out_[key] = std::move(sub);
        }
    }
    template <std::size_t N>
    void operator()(const char* key, Keyed<N> k) {
        Json sub = Json::object();
        for (std::size_t i = 0; i < N; ++i) sub[k.keys[i]] = k.values[i];
        out_[key] = std::move(sub);
    }

private:
    Json& out_;
};

class Reader {
public:
    Reader(const Json& node, std::string path, const std::string& text) : node_(node), path_(std::move(path)), text_(text) {}

    template <class T>
    void operator()(const char* key, T& value) {
        const Json* child = take(key);
        if (!child) return;
        const std::string where = qualified(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!child->is_boolean()) fail(where + " must be true or false", key);
            value = child->get<bool>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!child->is_number_integer()) fail(where + " must be an integer", key);
            if constexpr (std::is_unsigned_v<T>) {
                if (child->is_number_unsigned() || child->get<long long>() >= 0) value = child->get<T>();
                else fail(where + " must be >= 0", key);
            } else {
                value = child->get<T>();
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!child->is_number()) fail(where + " must be a number", key);
            value = child->get<T>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!child->is_string()) fail(where + " must be a string", key);
            value = child->get<std::string>();
        } else {
            if (!child->is_object()) fail(where + " must be an object", key);
            Reader r(*child, where, text_);
            visit(r, value);
            r.finish();
        }
    }
    template <std::size_t N>
    void operator()(const char* key, Keyed<N> k) {
        const Json* child = take(key);
        if (!child) return;
        const std::string where = qualified(key);
        if (!child->is_object()) fail(where + " must be an object", key);
        Reader r(*child, where, text_);
        for (std::size_t i = 0; i < N; ++i) r(k.keys[i], k.values[i]);
        r.finish();
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!seen_.count(it.key())) fail("unknown key '" + qualified(it.key().c_str()) + "'", it.key());
    }

    [[noreturn]] void fail(const std::string& msg, const std::string& key) const {
        throw ConfigError("config: " + msg, line_of_key(text_, key));
    }

    static int line_of_key(const std::string& text, const std::string& key) {
        const std::string needle = "\"" + key + "\"";
        std::size_t pos = text.find(needle);
        while (pos != std::string::npos) {
            std::size_t after = pos + needle.size();
            while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
            if (after < text.size() && text[after] == ':')
                return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
            pos = text.find(needle, pos + 1);
        }
        return 0;
    }

private:
    const Json* take(const char* key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }
    std::string qualified(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json& node_;
    std::string path_;
    const std::string& text_;
    std::set<std::string> seen_;
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

SurrogateForm AnalysisConfig::habitat_surrogate() const {
    return habitat_form == "quadratic" ? SurrogateForm::HabitatQuadratic : SurrogateForm::HabitatCubic;
}

SurrogateForm AnalysisConfig::f2e_surrogate() const {
    return f2e_budget_uses_x2_linear ? SurrogateForm::F2EBudgetLinearX2 : SurrogateForm::F2EBudget;
}

void RunConfig::validate() const {
    sim.validate();
    scenarios.validate();
    if (n_replicates < 1) throw ConfigError("config: n_replicates must be >= 1");
    if (analysis.habitat_form != "cubic" && analysis.habitat_form != "quadratic")
        throw ConfigError("config: analysis.habitat_form must be 'cubic' or 'quadratic'");
}

RunConfig parse_run_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ConfigError("config: malformed JSON at line " + std::to_string(line) + ": " + e.what(), line);
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object", 1);
    RunConfig config;
    Reader reader(doc, "", text);
    visit(reader, config);
    reader.finish();
    try {
        config.validate();
    } catch (const ConfigError& e) {
        // Point at the offending section when the message names one.
        std::smatch m;
        const std::string msg = e.what();
        int line = 0;
        static const std::regex field(R"(([a-z_]+) (must|max|step))");
        if (std::regex_search(msg, m, field)) line = Reader::line_of_key(text, m[1]);
        throw ConfigError(msg, line);
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_run_config(ss.str());
    } catch (const ConfigError& e) {
        const std::string where = e.line() > 0 ? path + ":" + std::to_string(e.line()) : path;
        throw ConfigError(where + ": " + e.what(), e.line());
    }
}

Json to_json(const RunConfig& config) {
    RunConfig copy = config;
    Json out = Json::object();
    Writer w(out);
    visit(w, copy);
    return out;
}

std::string config_hash(const RunConfig& config) {
    Json j = to_json(config);
    j.erase("output_dir");
    j.erase("n_replicates");
    j.erase("base_seed");
    j.erase("scenarios");
    j.erase("analysis");
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : j.dump()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return hex64(h);
}

}  // namespace pandasim
