#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace pandasim {

enum class Cover : std::uint8_t { Farmland, Grassland, Shrub, Forest, Bamboo, Water, Builtup, Bare };

inline constexpr int kCoverCount = 8;

const char* cover_name(Cover c);
char cover_glyph(Cover c);

struct Coord {
    int x = 0;
    int y = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
};

inline constexpr int kNeverDisturbed = std::numeric_limits<int>::max();

struct Cell {
    Cover cover = Cover::Bare;
    double slope = 0.0;                    // degrees, [0, 60]
    std::int64_t firewood_stock = 0;       // whole kg
    int disturbance_age = kNeverDisturbed; // years since last human disturbance
    int succession_age = 0;                // years in current cover class
    bool cultivated = false;               // farmland under active cultivation
    bool abandoned = false;                // farmland taken out of production, succeeding
    int settlement = -1;                   // owning settlement for farmland cells
};

/// Suitability curves for the seven habitat factors. Distances are in cells.
struct SuitabilityParams {
    double slope_full = 15.0;       // suitability 1 at or below
    double slope_zero = 45.0;       // suitability 0 at or above
    double distance_radius = 10.0;  // roads / farmland / settlements saturate here
    double stream_peak = 5.0;       // suitability 1 within this distance of a stream
    double stream_zero = 15.0;      // falls linearly to 0 here
    double bamboo_radius = 10.0;    // 1 on bamboo, 0 at this distance
    std::array<double, kCoverCount> cover{0.1, 0.4, 0.6, 1.0, 1.0, 0.0, 0.0, 0.0};
    double disturbance_penalty = 0.5;  // cover suitability multiplier loss while disturbed
    int disturbance_window = 4;        // disturbed while disturbance_age < window
};

struct WorldConfig {
    int width = 100;
    int height = 100;
    // Fractions in Cover enum order; whatever is left over becomes Bare.
    std::array<double, kCoverCount> fractions{0.10, 0.10, 0.15, 0.45, 0.10, 0.02, 0.03, 0.05};
    int settlements = 6;
    int settlement_radius = 1;  // settlement cores are (2r+1)^2 Builtup blocks
    int slope_smoothing = 4;    // box-blur passes over the noise field
    int grass_dwell = 3;
    int shrub_dwell = 5;
    double forest_stock_kg = 8000.0;  // 4 years of a 2,000 kg reference demand
    double shrub_stock_kg = 4000.0;
    SuitabilityParams suitability;

    /// Throws ConfigError.
    void validate() const;
};

struct Landscape {
    static constexpr double kCellSize = 90.0;  // meters

    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    std::vector<Cell> cells;
    std::vector<Coord> settlements;
    std::vector<Coord> roads;
    std::vector<Coord> streams;
    // Static distance fields (cells, octile metric), computed at generation.
    std::vector<double> dist_road;
    std::vector<double> dist_stream;
    std::vector<double> dist_settlement;
    std::vector<double> dist_bamboo;
    std::int64_t forest_stock = 8000;
    std::int64_t shrub_stock = 4000;
    int grass_dwell = 3;
    int shrub_dwell = 5;

    std::size_t size() const { return cells.size(); }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    std::size_t index(Coord c) const { return index(c.x, c.y); }
    Coord coord(std::size_t i) const {
        return {static_cast<int>(i % width), static_cast<int>(i / width)};
    }
    Cell& at(int x, int y) { return cells[index(x, y)]; }
    const Cell& at(int x, int y) const { return cells[index(x, y)]; }

    /// Stock a cell of this cover regrows to.
    std::int64_t stock_capacity(Cover c) const;
    std::size_t count(Cover c) const;
    std::int64_t total_stock() const;

    /// Recompute the static distance fields from the current settlements/roads/streams/bamboo.
    void refresh_static_distances();

    /// Plain grid of cover glyphs, one row per line, preceded by a one-line JSON header.
    std::string dump() const;
};

/// Blank landscape of the given size (all Bare, flat), with fields sized.
Landscape make_blank_landscape(int width, int height);

Landscape generate_world(const WorldConfig& config, std::uint64_t seed);

/// One year of vegetation succession. Abandoned farmland enters the grass stage
/// immediately; Grassland -> Shrub after grass_dwell years, Shrub -> Forest after
/// shrub_dwell years. Active farmland, Builtup and all other classes never transition.
void step_succession(Landscape& landscape);

/// Ages every cell's disturbance clock by one year (saturating at "never").
void age_disturbance(Landscape& landscape);

/// Multi-source octile distance transform (cells) to the cells where `is_source` is true.
/// Cells unreachable because there is no source get +infinity.
std::vector<double> distance_field(int width, int height, const std::vector<char>& is_source);

/// Seven habitat factors, in this order.
enum class HabitatFactor : int {
    Slope,
    StreamProximity,
    LandCover,
    Bamboo,
    RoadDistance,
    FarmlandDistance,
    SettlementDistance,
};
inline constexpr int kHabitatFactors = 7;

struct HabitatWeights {
    std::array<double, kHabitatFactors> w{1.0 / 7, 1.0 / 7, 1.0 / 7, 1.0 / 7,
                                          1.0 / 7, 1.0 / 7, 1.0 / 7};

    static HabitatWeights uniform() { return {}; }
    static HabitatWeights single(HabitatFactor f);
    /// Throws ConfigError unless non-negative and summing to 1 within 1e-9.
    void validate() const;
};

struct HabitatReport {
    double index = 0.0;       // sum of per-cell scores
    double mean = 0.0;        // index / cell count
    double normalized = 1.0;  // index / reference index (year 0), when one is given
    std::vector<double> per_cell;
};

/// Per-factor suitabilities of one cell, each in [0, 1].
std::array<double, kHabitatFactors> cell_suitability(const Landscape& landscape,
                                                     const SuitabilityParams& params,
                                                     std::size_t cell,
                                                     double farmland_distance);

HabitatReport compute_habitat_quality(const Landscape& landscape, const HabitatWeights& weights,
                                      const SuitabilityParams& params,
                                      double reference_index = 0.0);

}  // namespace pandasim
