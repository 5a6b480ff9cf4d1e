#pragma once

#include <cstdint>
#include <vector>

#include "pandasim/rng.hpp"

namespace pandasim {

enum class Sex : std::uint8_t { Female, Male };
enum class Marital : std::uint8_t { Single, Married, Widowed };
enum class Preference : std::uint8_t { ProfitMax, LeisureMax };
enum class Business : std::uint8_t { Agriculture, TempJob, Lodging };

inline constexpr int kBusinessCount = 3;

/// Small bit set over Business.
class BusinessSet {
public:
    constexpr BusinessSet() = default;
    constexpr BusinessSet(std::initializer_list<Business> items) {
        for (auto b : items) insert(b);
    }
    constexpr void insert(Business b) { bits_ |= bit(b); }
    constexpr void erase(Business b) { bits_ &= static_cast<std::uint8_t>(~bit(b)); }
    constexpr bool contains(Business b) const { return (bits_ & bit(b)) != 0; }
    constexpr int size() const { return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
    constexpr bool empty() const { return bits_ == 0; }
    friend constexpr bool operator==(BusinessSet, BusinessSet) = default;

private:
    static constexpr std::uint8_t bit(Business b) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(b));
    }
    std::uint8_t bits_ = 0;
};

struct Individual {
    std::int64_t id = 0;
    int age = 0;
    Sex sex = Sex::Female;
    int education_years = 0;
    Marital marital = Marital::Single;
    std::int64_t household_id = 0;
    std::int64_t spouse_id = -1;
};

struct Household {
    std::int64_t id = 0;
    std::vector<std::int64_t> member_ids;
    double labor = 0.0;     // labor units
    double land_mu = 0.0;   // owned farmland, enrolled part included
    double capital = 0.0;   // CNY
    Preference preference = Preference::ProfitMax;
    double risk_attitude = 0.0;  // 0 neutral .. 1 most averse
    int rooms = 1;
    double room_area_units = 1.0;  // hundreds of m^2
    BusinessSet businesses{Business::Agriculture};
    double g2g_enrolled_mu = 0.0;
    bool f2e_participant = false;
    // Fixed per-household draws.
    double productivity = 1.0;  // farm productivity multiplier
    double f2e_draw = 1.0;      // firewood-labor disutility multiplier
    int settlement = 0;
};

struct DemographyRates {
    double birth_rate = 0.012;         // per married woman aged 20-45
    double death_rate_young = 0.002;   // under death_age_band
    double death_rate_old = 0.03;      // at or over death_age_band
    int death_age_band = 60;
    double marriage_rate = 0.06;       // per single adult aged 20-45
    double out_migration_rate = 0.005; // per adult (18+)

    double death_rate(int age) const {
        if (age > 110) return 1.0;
        return age < death_age_band ? death_rate_young : death_rate_old;
    }
    /// Throws ConfigError unless every rate lies in [0, 1].
    void validate() const;
};

/// Distributions for households created at initialization or by marriage.
struct HouseholdTraits {
    double profit_max_share = 0.7;
    double productivity_sigma = 0.35;
    double f2e_draw_sigma = 0.5;
    double capital_median = 20000.0;
    double capital_sigma = 0.8;
    int rooms_min = 2;
    int rooms_max = 8;
    double room_area_min = 0.15;  // per room, hundreds of m^2
    double room_area_max = 0.30;
    double land_min_mu = 2.0;
    double land_max_mu = 8.0;
};

struct Population {
    std::vector<Individual> individuals;  // sorted by id
    std::vector<Household> households;    // sorted by id
    std::int64_t next_individual_id = 0;
    std::int64_t next_household_id = 0;

    Household* find_household(std::int64_t id);
    const Household* find_household(std::int64_t id) const;
    std::size_t size() const { return individuals.size(); }
};

/// Labor units of one member: 1.0 for ages 16-65, 0.5 for 66-75, else 0.
double member_labor(int age);

/// Recompute member lists and labor from the individual records.
void rebuild_membership(Population& population);

Population make_initial_population(int households, int settlements, const HouseholdTraits& traits,
                                   Rng& rng);

/// Draws the per-household traits (preference, risk, productivity, housing, capital).
void draw_household_traits(Household& h, const HouseholdTraits& traits, Rng& rng);

/// One year of lifecycle events. All individuals age by one year; then, evaluated on
/// that aged snapshot, each individual independently may die, out-migrate (adults),
/// give birth (married women 20-45 whose spouse is present) or marry (single adults
/// 20-45, bringing in a spouse). A marrying member of a household with other adults
/// leaves with the spouse to form a new household, taking half the land when the parent
/// holds more than 2 Mu. Emptied households are removed and their land passes to the
/// lowest-id household of the same settlement.
void step_demography(Population& population, const DemographyRates& rates,
                     const HouseholdTraits& traits, Rng& rng);

/// 1, 2 or 3 (3 or more businesses). Throws DomainError on an empty set.
int household_type(const Household& household);
int household_type(BusinessSet businesses);

}  // namespace pandasim
