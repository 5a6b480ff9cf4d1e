#pragma once

#include <cstdint>
#include <vector>

#include "pandasim/rng.hpp"
#include "pandasim/worldgen.hpp"

namespace pandasim {

struct FirewoodParams {
    int block_size = 5;
    double threshold_kg = 2000.0;  // block mean must exceed this
    double slope_cost = 0.1;       // per degree
    double goal_bias = 4.0;        // weight on detour cost relative to the step itself
    double visited_damping = 0.25;
    int max_steps = 0;             // <= 0: 4 * (width + height)
    bool disturb_path_cells = false;
    int replenish_period = 4;      // years

    int step_limit(const Landscape& l) const { return max_steps > 0 ? max_steps : 4 * (l.width + l.height); }
    void validate() const;
};

/// Square partition of the landscape with per-block mean stock.
struct ZoneMap {
    int block_size = 1;
    int blocks_x = 0;
    int blocks_y = 0;
    std::vector<double> block_means;  // row-major over blocks
    std::vector<char> designated;     // same shape

    int block_of(const Landscape& l, std::size_t cell) const;
    bool cell_designated(const Landscape& l, std::size_t cell) const {
        return designated[static_cast<std::size_t>(block_of(l, cell))] != 0;
    }
    bool any() const;
};

/// Blocks tile the grid (edge blocks may be partial). A block is designated when its
/// mean stock is strictly above the threshold.
ZoneMap designate_zones(const Landscape& landscape, int block_size, double threshold_kg);

/// Least travel cost from every cell to the nearest designated cell, where entering a
/// cell costs (1 + slope_cost * slope) times sqrt(2) for diagonal moves.
std::vector<double> zone_cost_distance(const Landscape& landscape, const ZoneMap& zones,
                                       double slope_cost);

enum class PathStatus { Arrived, NoZone, Timeout };

struct PathResult {
    PathStatus status = PathStatus::NoZone;
    std::vector<std::size_t> path;  // cell indices, start first
};

/// Roulette-wheel walk toward the designated zones. Each step picks one of the in-bounds
/// 8-neighbors with weight damping / (step_cost + goal_bias * detour), where detour is
/// how much the move adds over the best remaining cost (0 on an optimal move) and the
/// damping factor applies to already visited cells. With goal_bias = 0 the weights are
/// 1 / step_cost. `cost_distance` must come from zone_cost_distance for these zones.
PathResult search_path(std::size_t start, const ZoneMap& zones, const std::vector<double>& cost_distance,
                       const Landscape& landscape, const FirewoodParams& params, Rng& rng);

/// Convenience overload computing the cost-distance field.
PathResult search_path(std::size_t start, const ZoneMap& zones, const Landscape& landscape,
                       const FirewoodParams& params, Rng& rng);

struct Harvest {
    std::size_t cell = 0;
    std::int64_t kg = 0;
};

struct Trip {
    std::int64_t household_id = -1;
    std::vector<std::size_t> path;
    std::vector<Harvest> harvested_cells;
    std::int64_t demand_kg = 0;
    std::int64_t total_kg = 0;
    PathStatus status = PathStatus::Arrived;

    std::int64_t unmet_kg() const { return demand_kg - total_kg; }
};

/// Uniform random walk from `entry` harvesting min(stock, remaining) at every cell until
/// the demand is met or max_steps moves were made. Harvested cells get disturbance_age 0.
Trip collect(std::size_t entry, std::int64_t demand_kg, Landscape& landscape, int max_steps, Rng& rng);

/// Every `period`-th year, Forest and Shrub cells regrow to their capacity and every
/// other cover holds no stock. Other years leave the landscape untouched.
void replenish_stocks(Landscape& landscape, int years_elapsed, int period = 4);

}  // namespace pandasim
