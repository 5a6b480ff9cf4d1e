#include "pandasim/demography.hpp"

#include <algorithm>
#include <cmath>

#include "pandasim/error.hpp"

namespace pandasim {

namespace {

bool is_adult(int age) { return age >= 18; }
bool in_family_ages(int age) { return age >= 20 && age <= 45; }

void transfer_land(Household& from, Household& to) {
    to.land_mu += from.land_mu;
    to.g2g_enrolled_mu += from.g2g_enrolled_mu;
    from.land_mu = 0.0;
    from.g2g_enrolled_mu = 0.0;
}

}  // namespace

void DemographyRates::validate() const {
    for (double r : {birth_rate, death_rate_young, death_rate_old, marriage_rate, out_migration_rate})
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("demography: rates must lie in [0, 1]");
    if (death_age_band < 0 || death_age_band > 110)
        throw ConfigError("demography: death_age_band must lie in [0, 110]");
}

Household* Population::find_household(std::int64_t id) {
    auto it = std::lower_bound(households.begin(), households.end(), id,
                               [](const Household& h, std::int64_t v) { return h.id < v; });
    return it != households.end() && it->id == id ? &*it : nullptr;
}

const Household* Population::find_household(std::int64_t id) const {
    return const_cast<Population*>(this)->find_household(id);
}

double member_labor(int age) {
    if (age >= 16 && age <= 65) return 1.0;
    if (age >= 66 && age <= 75) return 0.5;
    return 0.0;
}

void rebuild_membership(Population& p) {
    for (auto& h : p.households) {
        h.member_ids.clear();
        h.labor = 0.0;
    }
    for (const auto& ind : p.individuals) {
        Household* h = p.find_household(ind.household_id);
        h->member_ids.push_back(ind.id);
        h->labor += member_labor(ind.age);
    }
}

void draw_household_traits(Household& h, const HouseholdTraits& t, Rng& rng) {
    h.preference = uniform01(rng) < t.profit_max_share ? Preference::ProfitMax : Preference::LeisureMax;
    h.risk_attitude = uniform01(rng);
    h.productivity = lognormal(rng, 0.0, t.productivity_sigma);
    h.f2e_draw = lognormal(rng, 0.0, t.f2e_draw_sigma);
    h.rooms = uniform_int(rng, t.rooms_min, t.rooms_max);
    const double per_room = t.room_area_min + (t.room_area_max - t.room_area_min) * uniform01(rng);
    h.room_area_units = h.rooms * per_room;
    h.capital = t.capital_median * std::exp(t.capital_sigma * (2.0 * uniform01(rng) - 1.0));
}

Population make_initial_population(int households, int settlements, const HouseholdTraits& t,
                                   Rng& rng) {
    Population p;
    for (int k = 0; k < households; ++k) {
        Household h;
        h.id = p.next_household_id++;
        h.settlement = settlements > 0 ? k % settlements : 0;
        draw_household_traits(h, t, rng);
        h.land_mu = std::round(2.0 * (t.land_min_mu + (t.land_max_mu - t.land_min_mu) * uniform01(rng))) / 2.0;
        h.businesses = {Business::Agriculture};

        const int head_age = uniform_int(rng, 25, 65);
        Individual head{p.next_individual_id++, head_age, Sex::Male, uniform_int(rng, 3, 9),
                        Marital::Married, h.id, -1};
        Individual spouse{p.next_individual_id++, std::clamp(head_age + uniform_int(rng, -3, 3), 18, 110),
                          Sex::Female, uniform_int(rng, 3, 9), Marital::Married, h.id, -1};
        head.spouse_id = spouse.id;
        spouse.spouse_id = head.id;
        p.individuals.push_back(head);
        p.individuals.push_back(spouse);
        const int children = uniform_int(rng, 0, 3);
        for (int c = 0; c < children; ++c) {
            const int age = uniform_int(rng, 0, std::max(0, std::min(spouse.age, head_age) - 20));
            Individual kid{p.next_individual_id++, age, uniform01(rng) < 0.5 ? Sex::Female : Sex::Male,
                           std::clamp(age - 6, 0, 12), Marital::Single, h.id, -1};
            p.individuals.push_back(kid);
        }
        if (uniform01(rng) < 0.3) {
            Individual elder{p.next_individual_id++, std::min(110, head_age + uniform_int(rng, 20, 30)),
                             Sex::Female, uniform_int(rng, 0, 4), Marital::Widowed, h.id, -1};
            p.individuals.push_back(elder);
        }
        p.households.push_back(std::move(h));
    }
    rebuild_membership(p);
    return p;
}

void step_demography(Population& p, const DemographyRates& rates, const HouseholdTraits& traits,
                     Rng& rng) {
    // Aging and schooling.
    for (auto& ind : p.individuals) {
        ind.age += 1;
        if (ind.age >= 7 && ind.age <= 18) ind.education_years += 1;
    }

    // Draw every individual's events against the aged snapshot.
    enum class Event : std::uint8_t { None, Death, Migration, Birth, Marriage };
    const std::size_t n = p.individuals.size();
    std::vector<Event> events(n, Event::None);
    for (std::size_t i = 0; i < n; ++i) {
        const Individual& ind = p.individuals[i];
        if (bernoulli(rng, rates.death_rate(ind.age))) {
            events[i] = Event::Death;
            continue;
        }
        if (is_adult(ind.age) && bernoulli(rng, rates.out_migration_rate)) {
            events[i] = Event::Migration;
            continue;
        }
        if (ind.sex == Sex::Female && ind.marital == Marital::Married && in_family_ages(ind.age)) {
            if (bernoulli(rng, rates.birth_rate)) events[i] = Event::Birth;
        } else if (ind.marital != Marital::Married && in_family_ages(ind.age)) {
            if (bernoulli(rng, rates.marriage_rate)) events[i] = Event::Marriage;
        }
    }

    auto find_individual = [&](std::int64_t id) -> Individual* {
        auto it = std::lower_bound(p.individuals.begin(), p.individuals.end(), id,
                                   [](const Individual& a, std::int64_t v) { return a.id < v; });
        return it != p.individuals.end() && it->id == id ? &*it : nullptr;
    };

    std::vector<Individual> arrivals;
    std::vector<char> removed(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Individual& ind = p.individuals[i];
        switch (events[i]) {
        case Event::Death:
        case Event::Migration: {
            removed[i] = 1;
            if (ind.spouse_id >= 0) {
                if (Individual* s = find_individual(ind.spouse_id)) {
                    s->marital = events[i] == Event::Death ? Marital::Widowed : Marital::Single;
                    s->spouse_id = -1;
                }
            }
            break;
        }
        case Event::Birth: {
            Individual baby{p.next_individual_id++, 0, uniform01(rng) < 0.5 ? Sex::Female : Sex::Male,
                            0, Marital::Single, ind.household_id, -1};
            arrivals.push_back(baby);
            break;
        }
        case Event::Marriage: {
            Individual spouse{p.next_individual_id++,
                              std::clamp(ind.age + uniform_int(rng, -3, 3), 18, 110),
                              ind.sex == Sex::Female ? Sex::Male : Sex::Female,
                              uniform_int(rng, 6, 12), Marital::Married, ind.household_id, ind.id};
            ind.marital = Marital::Married;
            ind.spouse_id = spouse.id;

            Household* parent = p.find_household(ind.household_id);
            int other_adults = 0;
            for (std::int64_t mid : parent->member_ids) {
                if (mid == ind.id) continue;
                const Individual* m = find_individual(mid);
                if (m && is_adult(m->age) && !removed[static_cast<std::size_t>(m - p.individuals.data())])
                    ++other_adults;
            }
            if (other_adults > 0) {
                Household h;
                h.id = p.next_household_id++;
                h.settlement = parent->settlement;
                draw_household_traits(h, traits, rng);
                h.capital = 0.1 * parent->capital;
                parent->capital -= h.capital;
                h.f2e_participant = parent->f2e_participant;
                if (parent->land_mu > 2.0) {
                    const double share = parent->land_mu / 2.0;
                    const double enrolled_share = parent->g2g_enrolled_mu / 2.0;
                    h.land_mu = share;
                    h.g2g_enrolled_mu = enrolled_share;
                    parent->land_mu -= share;
                    parent->g2g_enrolled_mu -= enrolled_share;
                }
                h.businesses = h.land_mu > 0.0 ? BusinessSet{Business::Agriculture}
                                               : BusinessSet{Business::TempJob};
                ind.household_id = h.id;
                spouse.household_id = h.id;
                // Membership is rebuilt below; keep the parent's list stable for later checks.
                p.households.push_back(std::move(h));
                parent = nullptr;
            }
            arrivals.push_back(spouse);
            break;
        }
        case Event::None: break;
        }
    }

    std::vector<Individual> next;
    next.reserve(n + arrivals.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) next.push_back(p.individuals[i]);
    next.insert(next.end(), arrivals.begin(), arrivals.end());
    std::sort(next.begin(), next.end(), [](const Individual& a, const Individual& b) { return a.id < b.id; });
    p.individuals = std::move(next);

    rebuild_membership(p);

    // Drop emptied households, handing their land on within the settlement.
    std::vector<Household> kept;
    kept.reserve(p.households.size());
    std::vector<Household> emptied;
    for (auto& h : p.households) {
        if (h.member_ids.empty()) emptied.push_back(std::move(h));
        else kept.push_back(std::move(h));
    }
    for (auto& e : emptied) {
        auto heir = std::find_if(kept.begin(), kept.end(),
                                 [&](const Household& h) { return h.settlement == e.settlement; });
        if (heir != kept.end()) transfer_land(e, *heir);
    }
    p.households = std::move(kept);
}

int household_type(BusinessSet businesses) {
    const int n = businesses.size();
    if (n == 0) throw DomainError("household_type: empty business set");
    return std::min(n, 3);
}

int household_type(const Household& household) { return household_type(household.businesses); }

}  // namespace pandasim
