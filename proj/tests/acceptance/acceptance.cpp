// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "pandasim/analysis.hpp"
#include "pandasim/config.hpp"
#include "pandasim/energy.hpp"
#include "pandasim/firewood.hpp"
#include "pandasim/fixtures.hpp"
#include "pandasim/report.hpp"
#include "pandasim/sweep_io.hpp"

using namespace pandasim;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1f s)", secs);
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << buf;
    if (!o.detail.empty()) std::cout << " - " << o.detail;
    std::cout << std::endl;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Max relative energy-balance error over every household-year seen.
struct BalanceAudit {
    std::atomic<std::uint64_t> records{0};
    std::mutex mu;
    double worst = 0.0;

    EnergyObserver observer() {
        return [this](const HouseholdEnergyRecord& r) {
            const auto& p = r.profile;
            const double lhs = p.electricity_kwh + 2.25 * p.firewood_kg;
            const double err = p.tend_kwh_eq > 0 ? std::fabs(lhs - p.tend_kwh_eq) / p.tend_kwh_eq : std::fabs(lhs);
            records.fetch_add(1, std::memory_order_relaxed);
            if (err > 0.0) {
                std::lock_guard<std::mutex> lock(mu);
                worst = std::max(worst, err);
            }
        };
    }
};

std::vector<oracle::Triple> triples(const std::vector<ParetoPoint>& pts) {
    std::vector<oracle::Triple> t;
    for (const auto& p : pts)
        t.push_back({p.objectives.carbon_kg, p.objectives.habitat_index, p.objectives.gross_economic_benefits});
    return t;
}

std::vector<ParetoPoint> points_of(const std::vector<oracle::Triple>& t) {
    std::vector<ParetoPoint> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i].objectives = {t[i].carbon, t[i].habitat, t[i].econ};
    return out;
}

Outcome nested_r2(const std::vector<ParetoPoint>& pts, const std::string& label) {
    Outcome o;
    AnalysisConfig cubic, quad;
    quad.habitat_form = "quadratic";
    const AnalysisResult ac = analyze_points(pts, cubic);
    const AnalysisResult aq = analyze_points(pts, quad);
    const auto* c = ac.surrogate("habitat");
    const auto* q = aq.surrogate("habitat");
    o.require(c && c->model && q && q->model, label + ": habitat fits failed" + (c ? " (" + c->error + ")" : ""));
    if (!o.pass) return o;
    o.require(c->model->train_r2 >= q->model->train_r2,
              label + ": cubic " + fmt(c->model->train_r2) + " < quadratic " + fmt(q->model->train_r2));
    o.detail = label + ": cubic " + fmt(c->model->train_r2) + " >= quadratic " + fmt(q->model->train_r2);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    int replicates = 30;
    int threads = 0;
    app.add_option("--replicates", replicates, "replicates for the full sweep");
    app.add_option("--threads", threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

    const RunConfig defaults;
    SweepOptions options;
    options.threads = threads;
    options.config_hash = config_hash(defaults);

    report("energy regression fixture: exponents to 12 significant digits, eight coefficients pinned", [] {
        Outcome o;
        EnergyCoefficients c;
        o.require(c.tend.constant == 6.069 && c.tend.household_type == 0.205 && c.tend.room_area == 0.050 &&
                      c.tend.rooms == 0.009,
                  "total-demand coefficients changed");
        o.require(c.teld.constant == 5.684 && c.teld.room_area == 0.072 && c.teld.business_type == 0.447 &&
                      c.teld.household_type == 0.216,
                  "electricity coefficients changed");
        c.demand_unit_scale = 1.0;
        struct Case { double got; double want; const char* what; };
        const Case cases[] = {
            {c.tend_exponent(1, 1, 1), 6.333, "tend(1,1,1)"},
            {c.tend_exponent(0, 0, 0), 6.069, "tend(0,0,0)"},
            {c.tend_exponent(3, 2, 8), 6.856, "tend(3,2,8)"},
            {c.teld_exponent(2, 1, 1), 6.635, "teld(2,1,1)"},
            {total_energy_demand({1, 1, 1, false}, c), std::pow(10.0, 6.333), "TEND type 1"},
            {total_energy_demand({3, 2, 8, false}, c), std::pow(10.0, 6.856), "TEND type 3"},
            {std::pow(10.0, c.tend_exponent(0, 0, 0)), std::pow(10.0, 6.069), "constant only"},
        };
        for (const auto& k : cases) o.require(oracle::same_sig(k.got, k.want, 12), std::string(k.what) + " = " + fmt(k.got));
        o.require(oracle::same_sig(total_energy_demand({1, 1, 1, false}, c), 2.1528e6, 4), "TEND type 1 ~ 2.1528e6");
        auto uncapped = c;
        uncapped.tend.constant = 9.0;
        o.require(oracle::same_sig(total_electricity_demand({2, 1, 1, true}, 0.65, uncapped), std::pow(10.0, 6.635), 12),
                  "TELD type 2 with lodging");
        return o;
    });

    report("carbon exactness on 10,000 random pairs", [] {
        Outcome o;
        std::mt19937_64 rng(1437);
        std::uniform_real_distribution<double> f(0, 5e6), e(0, 5e6);
        const CarbonFactors factors;
        o.require(factors.firewood == 1.4375 && factors.electricity == 0.96, "factors changed");
        for (int k = 0; k < 10000 && o.pass; ++k) {
            const double F = f(rng), E = e(rng);
            const double want = 1.4375 * F + 0.96 * E;
            o.require(carbon_footprint(F, E) == want, "pair " + std::to_string(k) + " differs");
        }
        return o;
    });

    report("energy balance, smoke scale (3 x 3 scenarios)", [&] {
        Outcome o;
        BalanceAudit audit;
        SweepOptions opt = options;
        opt.observer = audit.observer();
        const std::vector<PolicyScenario> grid{{0, 0.65}, {0, 0.35}, {0, 0.05},     {1000, 0.65}, {1000, 0.35},
                                               {1000, 0.05}, {2000, 0.65}, {2000, 0.35}, {2000, 0.05}};
        run_sweep(defaults.sim, grid, 3, defaults.base_seed, opt);
        o.require(audit.records > 0, "no household-years observed");
        o.require(audit.worst <= 1e-6, "max relative error " + fmt(audit.worst));
        o.detail = std::to_string(audit.records.load()) + " household-years, max rel err " + fmt(audit.worst);
        return o;
    });

    report("pareto oracle on 200 random instances", [] {
        Outcome o;
        std::mt19937_64 rng(5150);
        std::uniform_int_distribution<std::size_t> size(1, 1000);
        std::uniform_int_distribution<int> levels(2, 50);
        std::uniform_real_distribution<double> u(0, 1);
        std::size_t total = 0;
        for (int k = 0; k < 200 && o.pass; ++k) {
            std::vector<oracle::Triple> t;
            if (k % 4 == 3) {
                t.resize(size(rng));
                for (auto& x : t) x = {u(rng), u(rng), u(rng)};
            } else {
                t = oracle::random_triples(rng, size(rng), levels(rng));
            }
            total += t.size();
            o.require(frontier_mask(points_of(t)) == oracle::brute_force_frontier(t), "instance " + std::to_string(k));
        }
        o.detail = std::to_string(total) + " points checked";
        return o;
    });

    report("published surrogate values", [] {
        Outcome o;
        FittedSurrogate g;
        g.form = SurrogateForm::G2GBudget;
        g.coefficients = {1.8845, 0.0047, 226620.6};
        FittedSurrogate f;
        f.form = SurrogateForm::F2EBudget;
        f.coefficients = {1.9104e-8, 0.5094, -824291.4};
        o.require(oracle::rel_err(eval_surrogate(g, 0, 0), 226622.4845) <= 1e-12, "G2G at 0");
        o.require(eval_surrogate(f, 0, 0) == -824291.4, "F2E at origin");
        const double want = 1.8845 * std::exp(4.7) + 226620.6;
        o.require(oracle::rel_err(eval_surrogate(g, 1000, 0), want) <= 1e-12, "G2G at 1000 vs direct evaluation");
        o.require(oracle::rel_err(eval_surrogate(g, 1000, 0), 226827.8) <= 1e-6, "G2G at 1000 ~ 226827.8");
        return o;
    });

    report("reference frontier posterior choice is (G2G 900, F2E 0.35)", [] {
        Outcome o;
        PosteriorQuery q;
        q.budget_cap = 5e6;
        q.min_reverted_area_mu = 2500;
        q.weights = {0.4, 0.4, 0.2};
        const auto ranked = posterior_select(reference_frontier_fixture(), q);
        o.require(!ranked.empty(), "no survivors");
        if (o.pass) {
            o.require(ranked.front().point.scenario == PolicyScenario(900, 0.35),
                      "top is " + ranked.front().point.scenario.id());
            o.detail = "top " + ranked.front().point.scenario.id() + " of " + std::to_string(ranked.size());
        }
        return o;
    });

    report("firewood mass conservation and path validity over 10,000 trips", [] {
        Outcome o;
        const WorldConfig wc;
        Landscape l = generate_world(wc, 4242);
        const FirewoodParams params;
        Rng rng = make_stream(4242, 3);
        ZoneMap zones;
        std::vector<double> cost;
        int arrived = 0, timeouts = 0, nozone = 0;
        std::int64_t harvested = 0;
        for (int trip = 0; trip < 10000 && o.pass; ++trip) {
            if (trip % 500 == 0) {
                replenish_stocks(l, 4, 4);
                zones = designate_zones(l, params.block_size, params.threshold_kg);
                cost = zone_cost_distance(l, zones, params.slope_cost);
            }
            const std::size_t start = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(l.size()) - 1));
            const auto path = search_path(start, zones, cost, l, params, rng);
            const std::string tag = "trip " + std::to_string(trip);
            switch (path.status) {
            case PathStatus::Arrived:
                ++arrived;
                o.require(!path.path.empty() && path.path.front() == start, tag + ": path does not start at start");
                o.require(zones.cell_designated(l, path.path.back()), tag + ": arrived outside a zone");
                break;
            case PathStatus::Timeout:
                ++timeouts;
                o.require(path.path.size() == static_cast<std::size_t>(params.step_limit(l)) + 1, tag + ": timeout length");
                break;
            case PathStatus::NoZone:
                ++nozone;
                o.require(!zones.any() && path.path.empty(), tag + ": no-zone status with zones present");
                break;
            }
            for (std::size_t k = 1; k < path.path.size(); ++k) {
                const Coord a = l.coord(path.path[k - 1]), b = l.coord(path.path[k]);
                o.require(std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) == 1, tag + ": step not 8-connected");
            }
            if (path.path.empty()) continue;

            const std::int64_t demand = uniform_int(rng, 0, 6000);
            const std::int64_t before = l.total_stock();
            const std::size_t entry = path.path.back();
            const Coord ec = l.coord(entry);
            const auto t = collect(entry, demand, l, 200, rng);
            const std::int64_t after = l.total_stock();
            std::int64_t sum = 0;
            for (const auto& h : t.harvested_cells) {
                o.require(h.kg > 0, tag + ": empty harvest entry");
                sum += h.kg;
                o.require(l.cells[h.cell].firewood_stock >= 0, tag + ": negative stock");
                const Coord hc = l.coord(h.cell);
                o.require(std::max(std::abs(hc.x - ec.x), std::abs(hc.y - ec.y)) <= 200, tag + ": harvest out of reach");
            }
            o.require(sum == t.total_kg, tag + ": harvest entries do not sum to the total");
            o.require(before - after == t.total_kg, tag + ": stock decrement " + std::to_string(before - after) +
                                                        " != harvest " + std::to_string(t.total_kg));
            o.require(t.total_kg <= demand, tag + ": harvested more than demanded");
            harvested += t.total_kg;
        }
        o.detail = std::to_string(arrived) + " arrived, " + std::to_string(timeouts) + " timed out, " +
                   std::to_string(nozone) + " without zone, " + std::to_string(harvested) + " kg harvested";
        return o;
    });

    report("determinism: two smoke sweeps give byte-identical CSV and bundle", [&] {
        Outcome o;
        const auto grid = scenario_grid(parse_scenario_spec("g2g=0..2000:1000,f2e=0.05..0.65:0.3"));
        std::string csv[2], bundle[2];
        for (int k = 0; k < 2; ++k) {
            const auto sweep = run_sweep(defaults.sim, grid, 3, 777, options);
            csv[k] = sweep_csv(sweep);
            const auto a = analyze_points(reference_points(sweep), defaults.analysis);
            BundleInfo info;
            info.config_hash = sweep.metadata.config_hash;
            info.reference_year = sweep.results.front().reference_year().year;
            bundle[k] = explorer_bundle(a, info).dump();
        }
        o.require(csv[0] == csv[1], "CSV differs");
        o.require(bundle[0] == bundle[1], "bundle differs");
        o.detail = std::to_string(grid.size()) + " scenarios, " + std::to_string(csv[0].size()) + " CSV bytes";
        return o;
    });

    // Full default sweep; the remaining criteria all read from it.
    std::cout << "running the full default sweep: " << scenario_grid(defaults.scenarios).size() << " scenarios x "
              << replicates << " replicates" << std::endl;
    BalanceAudit audit;
    SweepOptions full_opt = options;
    full_opt.observer = audit.observer();
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult sweep;
    std::string sweep_error;
    try {
        sweep = run_sweep(defaults.sim, scenario_grid(defaults.scenarios), replicates, defaults.base_seed, full_opt);
    } catch (const std::exception& e) {
        sweep_error = e.what();
    }
    const double sweep_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "full sweep finished in " << fmt(sweep_secs) << " s" << std::endl;

    report("energy balance over the full default sweep", [&] {
        Outcome o;
        o.require(sweep_error.empty(), sweep_error);
        o.require(audit.records > 0, "no household-years observed");
        o.require(audit.worst <= 1e-6, "max relative error " + fmt(audit.worst));
        o.require(sweep_secs < 600.0, "took " + fmt(sweep_secs) + " s");
        o.detail = std::to_string(audit.records.load()) + " household-years, max rel err " + fmt(audit.worst) + ", " +
                   fmt(sweep_secs) + " s";
        return o;
    });

    const auto points = sweep.results.empty() ? std::vector<ParetoPoint>{} : reference_points(sweep);

    report("pareto oracle on the sweep's reference points", [&] {
        Outcome o;
        o.require(points.size() == 273, "expected 273 points, got " + std::to_string(points.size()));
        if (!o.pass) return o;
        const auto mask = frontier_mask(points);
        o.require(mask == oracle::brute_force_frontier(triples(points)), "mask differs from the oracle");
        o.detail = std::to_string(std::count(mask.begin(), mask.end(), true)) + " frontier points";
        return o;
    });

    report("habitat cubic train R2 >= quadratic on every sweep dataset", [&] {
        Outcome o;
        o.require(!points.empty(), "no sweep");
        if (!o.pass) return o;
        const Outcome full = nested_r2(points, "full sweep");
        o.require(full.pass, full.detail);
        // The G2G column and a coarse sub-lattice as further datasets.
        std::vector<ParetoPoint> column, coarse;
        for (const auto& p : points) {
            if (p.scenario.f2e_price == 0.65) column.push_back(p);
            if (static_cast<int>(p.scenario.g2g_compensation) % 200 == 0) coarse.push_back(p);
        }
        const Outcome c1 = nested_r2(column, "f2e=0.65 column");
        const Outcome c2 = nested_r2(coarse, "even-hundred sub-lattice");
        o.require(c1.pass, c1.detail);
        o.require(c2.pass, c2.detail);
        if (o.pass) o.detail = full.detail + "; " + c1.detail + "; " + c2.detail;
        return o;
    });

    report("reverted area rises with compensation and flattens above 1000", [&] {
        Outcome o;
        std::vector<double> level, area;
        for (const auto& r : sweep.results)
            if (r.scenario.f2e_price == 0.65) {
                level.push_back(r.scenario.g2g_compensation);
                area.push_back(r.reference_year().reverted_area_mu);
            }
        o.require(level.size() == 21, "expected 21 levels, got " + std::to_string(level.size()));
        if (!o.pass) return o;
        const double rho = oracle::spearman(level, area);
        const double low = area[10] - area[0];
        const double high = area[20] - area[10];
        o.require(rho >= 0.9, "spearman " + fmt(rho));
        o.require(high < low, "gain over [1000,2000] " + fmt(high) + " >= gain over [0,1000] " + fmt(low));
        o.detail = "spearman " + fmt(rho) + ", gain 0-1000 " + fmt(low) + " Mu, 1000-2000 " + fmt(high) + " Mu";
        return o;
    });

    report("subsidy falls with price and cheaper power saves firewood", [&] {
        Outcome o;
        std::vector<double> price, subsidy;
        double fw45 = NAN, fw65 = NAN;
        for (const auto& r : sweep.results)
            if (r.scenario.g2g_compensation == 0.0) {
                price.push_back(r.scenario.f2e_price);
                subsidy.push_back(r.reference_year().f2e_subsidy);
                if (r.scenario == PolicyScenario(0, 0.45)) fw45 = r.reference_year().firewood_kg;
                if (r.scenario == PolicyScenario(0, 0.65)) fw65 = r.reference_year().firewood_kg;
            }
        o.require(price.size() == 13, "expected 13 prices, got " + std::to_string(price.size()));
        if (!o.pass) return o;
        const double rho = oracle::spearman(price, subsidy);
        o.require(rho <= -0.9, "spearman " + fmt(rho));
        o.require(fw45 < fw65, "firewood at 0.45 " + fmt(fw45) + " >= at 0.65 " + fmt(fw65));
        o.detail = "spearman " + fmt(rho) + ", firewood 0.45: " + fmt(fw45) + " kg vs 0.65: " + fmt(fw65) + " kg";
        return o;
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
