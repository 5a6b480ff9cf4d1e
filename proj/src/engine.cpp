#include "pandasim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

#include "pandasim/error.hpp"
#include "pandasim/rng.hpp"

namespace pandasim {

namespace {

enum Stream : std::uint64_t { kDemographyStream = 1, kDecisionStream = 2, kFirewoodStream = 3 };

std::uint64_t scenario_salt(const PolicyScenario& s) {
    // FNV-1a over the scenario id.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s.id()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

/// Farmland cells of one settlement, farthest from the settlement first.
struct SettlementLand {
    std::vector<std::size_t> cells;
    std::size_t reverted = 0;
};

class Replicate {
public:
    Replicate(const SimConfig& config, const PolicyScenario& scenario, std::uint64_t seed,
              const Landscape& world, const EnergyObserver& observer)
        : config_(config),
          scenario_(scenario),
          world_(world),
          observer_(observer),
          demo_rng_(make_stream(seed, kDemographyStream)),
          decision_rng_(make_stream(seed, kDecisionStream)),
          firewood_rng_(make_stream(seed, kFirewoodStream)) {
        population_ = make_initial_population(config.households,
                                              static_cast<int>(world_.settlements.size()),
                                              config.traits, demo_rng_);
        land_.resize(world_.settlements.size());
        for (std::size_t i = 0; i < world_.size(); ++i) {
            const Cell& c = world_.cells[i];
            if (c.cover == Cover::Farmland && c.settlement >= 0)
                land_[static_cast<std::size_t>(c.settlement)].cells.push_back(i);
        }
        for (std::size_t s = 0; s < land_.size(); ++s) {
            const Coord center = world_.settlements[s];
            auto far = [&](std::size_t i) {
                const Coord p = world_.coord(i);
                const long dx = p.x - center.x;
                const long dy = p.y - center.y;
                return dx * dx + dy * dy;
            };
            std::stable_sort(land_[s].cells.begin(), land_[s].cells.end(),
                             [&](std::size_t a, std::size_t b) { return far(a) > far(b); });
        }
        reference_habitat_ =
            compute_habitat_quality(world_, config_.habitat_weights, config_.world.suitability).index;
    }

    std::vector<YearlyIndicators> run() {
        std::vector<YearlyIndicators> out;
        out.reserve(static_cast<std::size_t>(config_.years));
        for (int t = 1; t <= config_.years; ++t) out.push_back(step(t));
        return out;
    }

private:
    YearlyIndicators step(int t) {
        const int year = config_.start_year + t;
        age_disturbance(world_);

        step_demography(population_, config_.demography, config_.traits, demo_rng_);
        auto& households = population_.households;

        for (auto& h : households) {
            h.g2g_enrolled_mu =
                decide_g2g_participation(h, scenario_.g2g_compensation, config_.economy, decision_rng_);
            h.f2e_participant = decide_f2e_participation(h, scenario_.f2e_price, config_.economy, decision_rng_);
        }

        std::vector<HouseholdPlan> plans;
        plans.reserve(households.size());
        for (auto& h : households) {
            plans.push_back(decide_production(h, config_.economy));
            const BusinessSet active = plans.back().businesses();
            if (!active.empty()) h.businesses = active;
        }

        std::vector<EnergyProfile> profiles;
        profiles.reserve(households.size());
        YearlyIndicators ind;
        ind.year = year;
        for (std::size_t k = 0; k < households.size(); ++k) {
            Household& h = households[k];
            EnergyInputs in;
            in.household_type = household_type(h);
            in.room_area_units = h.room_area_units;
            in.rooms = h.rooms;
            in.lodging = h.businesses.contains(Business::Lodging);
            profiles.push_back(energy_profile(in, scenario_.f2e_price, h.f2e_participant, config_.energy));
            const EnergyProfile& p = profiles.back();
            if (observer_) observer_({year, h.id, p});

            const double compensation = scenario_.g2g_compensation * h.g2g_enrolled_mu;
            const double net = household_income(plans[k], compensation, p.electricity_cost);
            h.capital = std::max(0.0, h.capital + config_.savings_rate * net);

            ind.reverted_area_mu += h.g2g_enrolled_mu;
            ind.firewood_kg += p.firewood_kg;
            ind.electricity_kwh += p.electricity_kwh;
            ind.tend_kwh_eq += p.tend_kwh_eq;
            ind.gross_revenue += plans[k].expected_income;
            ind.f2e_participants += h.f2e_participant ? 1.0 : 0.0;
        }
        const PolicyLedger ledger = settle_year(households, scenario_, profiles);
        ind.g2g_expenditure = ledger.g2g_expenditure;
        ind.f2e_subsidy = ledger.f2e_subsidy;
        ind.financial_burden = ledger.financial_burden;
        ind.gross_economic_benefits = ind.gross_revenue - ind.financial_burden;
        ind.carbon_kg = carbon_footprint(ind.firewood_kg, ind.electricity_kwh, config_.carbon);
        ind.population = static_cast<double>(population_.size());
        ind.households = static_cast<double>(households.size());

        ind.firewood_unmet_kg = collect_firewood(profiles);
        update_farmland(plans);
        step_succession(world_);
        replenish_stocks(world_, t, config_.firewood.replenish_period);

        const auto habitat = compute_habitat_quality(world_, config_.habitat_weights,
                                                     config_.world.suitability, reference_habitat_);
        ind.habitat_index = habitat.index;
        ind.habitat_index_normalized = habitat.normalized;
        return ind;
    }

    double collect_firewood(const std::vector<EnergyProfile>& profiles) {
        const auto& fp = config_.firewood;
        const ZoneMap zones = designate_zones(world_, fp.block_size, fp.threshold_kg);
        const auto cost = zone_cost_distance(world_, zones, fp.slope_cost);
        const int limit = fp.step_limit(world_);

        auto& households = population_.households;
        std::vector<std::size_t> order(households.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), firewood_rng_);

        double unmet = 0.0;
        for (std::size_t k : order) {
            const std::int64_t demand = std::llround(profiles[k].firewood_kg);
            if (demand <= 0) continue;
            const Household& h = households[k];
            const Coord home = world_.settlements[static_cast<std::size_t>(h.settlement) % world_.settlements.size()];
            const PathResult route = search_path(world_.index(home), zones, cost, world_, fp, firewood_rng_);
            if (route.status != PathStatus::Arrived) {
                unmet += static_cast<double>(demand);
                continue;
            }
            if (fp.disturb_path_cells)
                for (std::size_t c : route.path) world_.cells[c].disturbance_age = 0;
            const Trip trip = collect(route.path.back(), demand, world_, limit, firewood_rng_);
            unmet += static_cast<double>(trip.unmet_kg());
        }
        return unmet;
    }

    void update_farmland(const std::vector<HouseholdPlan>& plans) {
        const std::size_t ns = land_.size();
        std::vector<double> owned(ns, 0.0), enrolled(ns, 0.0), cultivated(ns, 0.0);
        const auto& households = population_.households;
        for (std::size_t k = 0; k < households.size(); ++k) {
            const auto s = static_cast<std::size_t>(households[k].settlement) % ns;
            owned[s] += households[k].land_mu;
            enrolled[s] += households[k].g2g_enrolled_mu;
            cultivated[s] += plans[k].cultivated_mu;
        }
        for (std::size_t s = 0; s < ns; ++s) {
            SettlementLand& land = land_[s];
            const std::size_t total = land.cells.size();
            if (total == 0 || owned[s] <= 0.0) continue;
            // Reversion is durable: the reverted cell count only grows.
            const auto target = static_cast<std::size_t>(
                std::llround(std::min(1.0, enrolled[s] / owned[s]) * static_cast<double>(total)));
            while (land.reverted < target) {
                Cell& c = world_.cells[land.cells[land.reverted++]];
                c.cultivated = false;
                c.abandoned = true;
                c.succession_age = 0;
            }
            // Cultivate the nearest of the remaining cells in proportion to cultivated area.
            const std::size_t remaining = total - land.reverted;
            const double free = owned[s] - enrolled[s];
            const auto worked = free > 0.0
                                    ? static_cast<std::size_t>(std::llround(
                                          std::min(1.0, cultivated[s] / free) * static_cast<double>(remaining)))
                                    : std::size_t{0};
            for (std::size_t k = 0; k < remaining; ++k) {
                Cell& c = world_.cells[land.cells[total - 1 - k]];
                if (c.cover != Cover::Farmland) continue;
                c.cultivated = k < worked;
                if (c.cultivated) c.disturbance_age = 0;
            }
        }
    }

    const SimConfig& config_;
    PolicyScenario scenario_;
    Landscape world_;
    const EnergyObserver& observer_;
    Rng demo_rng_;
    Rng decision_rng_;
    Rng firewood_rng_;
    Population population_;
    std::vector<SettlementLand> land_;
    double reference_habitat_ = 0.0;
};

}  // namespace

const std::array<YearlyIndicators::Field, 16>& YearlyIndicators::fields() {
    static const std::array<Field, 16> table{{
        {"reverted_area_mu", &YearlyIndicators::reverted_area_mu},
        {"firewood_kg", &YearlyIndicators::firewood_kg},
        {"electricity_kwh", &YearlyIndicators::electricity_kwh},
        {"g2g_expenditure", &YearlyIndicators::g2g_expenditure},
        {"f2e_subsidy", &YearlyIndicators::f2e_subsidy},
        {"financial_burden", &YearlyIndicators::financial_burden},
        {"carbon_kg", &YearlyIndicators::carbon_kg},
        {"habitat_index", &YearlyIndicators::habitat_index},
        {"habitat_index_normalized", &YearlyIndicators::habitat_index_normalized},
        {"gross_revenue", &YearlyIndicators::gross_revenue},
        {"gross_economic_benefits", &YearlyIndicators::gross_economic_benefits},
        {"tend_kwh_eq", &YearlyIndicators::tend_kwh_eq},
        {"firewood_unmet_kg", &YearlyIndicators::firewood_unmet_kg},
        {"f2e_participants", &YearlyIndicators::f2e_participants},
        {"population", &YearlyIndicators::population},
        {"households", &YearlyIndicators::households},
    }};
    return table;
}

void SimConfig::validate() const {
    world.validate();
    habitat_weights.validate();
    demography.validate();
    economy.validate();
    energy.validate();
    firewood.validate();
    if (households < 1) throw ConfigError("engine: households must be >= 1");
    if (years < 1) throw ConfigError("engine: years must be >= 1");
    if (savings_rate < 0.0 || savings_rate > 1.0) throw ConfigError("engine: savings_rate must lie in [0, 1]");
    if (traits.profit_max_share < 0.0 || traits.profit_max_share > 1.0)
        throw ConfigError("engine: profit_max_share must lie in [0, 1]");
    if (traits.rooms_min < 1 || traits.rooms_max < traits.rooms_min)
        throw ConfigError("engine: rooms range must satisfy 1 <= min <= max");
    if (traits.land_min_mu < 0.0 || traits.land_max_mu < traits.land_min_mu)
        throw ConfigError("engine: land range must satisfy 0 <= min <= max");
    if (!(traits.room_area_min > 0.0) || traits.room_area_max < traits.room_area_min)
        throw ConfigError("engine: room area range must satisfy 0 < min <= max");
}

std::uint64_t replicate_seed(std::uint64_t base_seed, int index) {
    return base_seed ^ static_cast<std::uint64_t>(index);
}

std::vector<YearlyIndicators> run_replicate(const SimConfig& config, const PolicyScenario& scenario,
                                            std::uint64_t seed, const Landscape& world,
                                            const EnergyObserver& observer) {
    return Replicate(config, scenario, seed, world, observer).run();
}

std::vector<YearlyIndicators> run_replicate(const SimConfig& config, const PolicyScenario& scenario,
                                            std::uint64_t seed, const EnergyObserver& observer) {
    config.validate();
    const Landscape world = generate_world(config.world, seed);
    return run_replicate(config, scenario, seed, world, observer);
}

ScenarioResult aggregate_replicates(const PolicyScenario& scenario, std::vector<ReplicateRun> runs) {
    if (runs.empty()) throw DomainError("aggregate_replicates: no replicates");
    std::sort(runs.begin(), runs.end(), [](const ReplicateRun& a, const ReplicateRun& b) { return a.index < b.index; });
    const std::size_t years = runs.front().years.size();
    const double n = static_cast<double>(runs.size());
    ScenarioResult r;
    r.scenario = scenario;
    r.n_replicates = static_cast<int>(runs.size());
    r.per_year_mean.resize(years);
    r.per_year_stddev.resize(years);
    for (std::size_t y = 0; y < years; ++y) {
        YearlyIndicators& mean = r.per_year_mean[y];
        YearlyIndicators& sd = r.per_year_stddev[y];
        mean.year = sd.year = runs.front().years[y].year;
        for (const auto& f : YearlyIndicators::fields()) {
            double sum = 0.0;
            for (const auto& run : runs) sum += run.years[y].*f.member;
            const double m = sum / n;
            double ss = 0.0;
            for (const auto& run : runs) {
                const double d = run.years[y].*f.member - m;
                ss += d * d;
            }
            mean.*f.member = m;
            sd.*f.member = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        }
    }
    return r;
}

ScenarioResult run_scenario(const SimConfig& config, const PolicyScenario& scenario, int n_replicates,
                            std::uint64_t base_seed) {
    auto sweep = run_sweep(config, {scenario}, n_replicates, base_seed);
    return std::move(sweep.results.front());
}

const ScenarioResult* SweepResult::find(const PolicyScenario& s) const {
    for (const auto& r : results)
        if (r.scenario == s) return &r;
    return nullptr;
}

int default_thread_count() {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    if (const char* env = std::getenv("PANDA_SIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) threads = std::min(threads, cap);
    }
    return threads;
}

SweepResult run_sweep(const SimConfig& config, const std::vector<PolicyScenario>& scenarios,
                      int n_replicates, std::uint64_t base_seed, const SweepOptions& options) {
    config.validate();
    if (scenarios.empty()) throw DomainError("run_sweep: no scenarios");
    if (n_replicates < 1) throw DomainError("run_sweep: n_replicates must be >= 1");

    auto seed_for = [&](std::size_t s, int r) {
        std::uint64_t seed = replicate_seed(base_seed, r);
        if (config.independent_scenario_seeds) seed ^= scenario_salt(scenarios[s]);
        return seed;
    };

    // With common random numbers the world depends only on the replicate index.
    std::vector<Landscape> shared_worlds;
    if (!config.independent_scenario_seeds) {
        shared_worlds.reserve(static_cast<std::size_t>(n_replicates));
        for (int r = 0; r < n_replicates; ++r) shared_worlds.push_back(generate_world(config.world, seed_for(0, r)));
    }

    const std::size_t tasks = scenarios.size() * static_cast<std::size_t>(n_replicates);
    std::vector<std::vector<ReplicateRun>> runs(scenarios.size());
    for (auto& r : runs) r.resize(static_cast<std::size_t>(n_replicates));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= tasks) return;
            const std::size_t s = task / static_cast<std::size_t>(n_replicates);
            const int r = static_cast<int>(task % static_cast<std::size_t>(n_replicates));
            try {
                const std::uint64_t seed = seed_for(s, r);
                ReplicateRun run;
                run.index = r;
                if (shared_worlds.empty()) {
                    const Landscape world = generate_world(config.world, seed);
                    run.years = run_replicate(config, scenarios[s], seed, world, options.observer);
                } else {
                    run.years = run_replicate(config, scenarios[s], seed,
                                              shared_worlds[static_cast<std::size_t>(r)], options.observer);
                }
                runs[s][static_cast<std::size_t>(r)] = std::move(run);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(tasks);
            }
        }
    };

    const int threads = std::max(1, std::min<int>(options.threads > 0 ? options.threads : default_thread_count(),
                                                  static_cast<int>(tasks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    SweepResult result;
    result.metadata.version = kVersion;
    result.metadata.config_hash = options.config_hash;
    result.metadata.base_seed = base_seed;
    result.metadata.n_replicates = n_replicates;
    result.metadata.start_year = config.start_year;
    result.metadata.years = config.years;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        result.results.push_back(aggregate_replicates(scenarios[s], std::move(runs[s])));
    return result;
}

}  // namespace pandasim
