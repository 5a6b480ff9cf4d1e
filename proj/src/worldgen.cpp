#include "pandasim/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pandasim/error.hpp"
#include "pandasim/rng.hpp"

namespace pandasim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;

std::vector<double> smoothed_noise(int w, int h, int passes, Rng& rng) {
    std::vector<double> a(static_cast<std::size_t>(w) * h);
    for (auto& v : a) v = uniform01(rng);
    std::vector<double> b(a.size());
    for (int p = 0; p < passes; ++p) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double sum = 0.0;
                int n = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int xx = x + dx;
                        const int yy = y + dy;
                        if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                        sum += a[static_cast<std::size_t>(yy) * w + xx];
                        ++n;
                    }
                }
                b[static_cast<std::size_t>(y) * w + x] = sum / n;
            }
        }
        a.swap(b);
    }
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    const double lo_v = *lo;
    const double span = *hi - *lo;
    for (auto& v : a) v = span > 0.0 ? (v - lo_v) / span : 0.0;
    return a;
}

double ramp_down(double v, double full, double zero) {
    if (v <= full) return 1.0;
    if (v >= zero) return 0.0;
    return (zero - v) / (zero - full);
}

double ramp_up(double d, double radius) {
    if (radius <= 0.0) return 1.0;
    return std::min(1.0, d / radius);
}

}  // namespace

const char* cover_name(Cover c) {
    switch (c) {
    case Cover::Farmland: return "Farmland";
    case Cover::Grassland: return "Grassland";
    case Cover::Shrub: return "Shrub";
    case Cover::Forest: return "Forest";
    case Cover::Bamboo: return "Bamboo";
    case Cover::Water: return "Water";
    case Cover::Builtup: return "Builtup";
    case Cover::Bare: return "Bare";
    }
    return "?";
}

char cover_glyph(Cover c) {
    static constexpr char glyphs[kCoverCount] = {'f', 'g', 's', 'T', 'b', '~', '#', '.'};
    return glyphs[static_cast<int>(c)];
}

void WorldConfig::validate() const {
    if (width < 20 || height < 20) throw ConfigError("world: width and height must be >= 20");
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("world: cover fractions must lie in [0, 1]");
        sum += f;
    }
    if (sum > 1.0 + 1e-9) throw ConfigError("world: cover fractions sum to more than 1");
    if (settlements < 1) throw ConfigError("world: at least one settlement is required");
    if (settlement_radius < 0) throw ConfigError("world: settlement_radius must be >= 0");
    if (slope_smoothing < 0) throw ConfigError("world: slope_smoothing must be >= 0");
    if (grass_dwell < 1 || shrub_dwell < 1) throw ConfigError("world: dwell times must be >= 1");
    if (forest_stock_kg < 0.0 || shrub_stock_kg < 0.0)
        throw ConfigError("world: firewood stocks must be >= 0");
    const auto& s = suitability;
    if (s.slope_zero <= s.slope_full) throw ConfigError("world: slope_zero must exceed slope_full");
    if (s.stream_zero <= s.stream_peak) throw ConfigError("world: stream_zero must exceed stream_peak");
    if (s.distance_radius <= 0.0 || s.bamboo_radius <= 0.0)
        throw ConfigError("world: suitability radii must be > 0");
    for (double c : s.cover)
        if (c < 0.0 || c > 1.0) throw ConfigError("world: cover suitabilities must lie in [0, 1]");
    if (s.disturbance_penalty < 0.0 || s.disturbance_penalty > 1.0)
        throw ConfigError("world: disturbance_penalty must lie in [0, 1]");
}

std::int64_t Landscape::stock_capacity(Cover c) const {
    if (c == Cover::Forest) return forest_stock;
    if (c == Cover::Shrub) return shrub_stock;
    return 0;
}

std::size_t Landscape::count(Cover c) const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [c](const Cell& cell) { return cell.cover == c; }));
}

std::int64_t Landscape::total_stock() const {
    std::int64_t total = 0;
    for (const auto& c : cells) total += c.firewood_stock;
    return total;
}

std::vector<double> distance_field(int width, int height, const std::vector<char>& is_source) {
    std::vector<double> d(is_source.size(), kInf);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (is_source[i]) d[i] = 0.0;
    auto idx = [width](int x, int y) { return static_cast<std::size_t>(y) * width + x; };
    // Two-pass chamfer scan with the exact 3x3 octile mask.
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double& v = d[idx(x, y)];
            if (x > 0) v = std::min(v, d[idx(x - 1, y)] + 1.0);
            if (y > 0) {
                v = std::min(v, d[idx(x, y - 1)] + 1.0);
                if (x > 0) v = std::min(v, d[idx(x - 1, y - 1)] + kSqrt2);
                if (x + 1 < width) v = std::min(v, d[idx(x + 1, y - 1)] + kSqrt2);
            }
        }
    }
    for (int y = height - 1; y >= 0; --y) {
        for (int x = width - 1; x >= 0; --x) {
            double& v = d[idx(x, y)];
            if (x + 1 < width) v = std::min(v, d[idx(x + 1, y)] + 1.0);
            if (y + 1 < height) {
                v = std::min(v, d[idx(x, y + 1)] + 1.0);
                if (x + 1 < width) v = std::min(v, d[idx(x + 1, y + 1)] + kSqrt2);
                if (x > 0) v = std::min(v, d[idx(x - 1, y + 1)] + kSqrt2);
            }
        }
    }
    return d;
}

void Landscape::refresh_static_distances() {
    const std::size_t n = cells.size();
    std::vector<char> src(n, 0);
    auto field_from = [&](const std::vector<Coord>& pts) {
        std::fill(src.begin(), src.end(), 0);
        for (const auto& p : pts) src[index(p)] = 1;
        return distance_field(width, height, src);
    };
    dist_road = field_from(roads);
    dist_stream = field_from(streams);
    std::fill(src.begin(), src.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
        src[i] = cells[i].cover == Cover::Builtup;
    // Settlement cores: Builtup cells that are not part of the road line.
    for (const auto& r : roads) src[index(r)] = 0;
    for (const auto& s : settlements) src[index(s)] = 1;
    dist_settlement = distance_field(width, height, src);
    std::fill(src.begin(), src.end(), 0);
    for (std::size_t i = 0; i < n; ++i) src[i] = cells[i].cover == Cover::Bamboo;
    dist_bamboo = distance_field(width, height, src);
}

std::string Landscape::dump() const {
    std::ostringstream os;
    os << "{\"width\":" << width << ",\"height\":" << height << ",\"seed\":" << seed
       << ",\"cell_size\":" << kCellSize << "}\n";
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) os << cover_glyph(at(x, y).cover);
        os << '\n';
    }
    return os.str();
}

Landscape make_blank_landscape(int width, int height) {
    Landscape l;
    l.width = width;
    l.height = height;
    l.cells.assign(static_cast<std::size_t>(width) * height, Cell{});
    l.refresh_static_distances();
    return l;
}

Landscape generate_world(const WorldConfig& config, std::uint64_t seed) {
    config.validate();
    const int w = config.width;
    const int h = config.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    Rng rng = make_stream(seed, 0x57'4f'52'4c'44ULL);

    Landscape l;
    l.width = w;
    l.height = h;
    l.seed = seed;
    l.cells.assign(n, Cell{});
    l.forest_stock = std::llround(config.forest_stock_kg);
    l.shrub_stock = std::llround(config.shrub_stock_kg);
    l.grass_dwell = config.grass_dwell;
    l.shrub_dwell = config.shrub_dwell;

    const auto slope_noise = smoothed_noise(w, h, config.slope_smoothing, rng);
    for (std::size_t i = 0; i < n; ++i) l.cells[i].slope = 60.0 * slope_noise[i];

    std::vector<char> assigned(n, 0);

    // Stream: meanders top to bottom.
    int sx = uniform_int(rng, w / 4, (3 * w) / 4);
    for (int y = 0; y < h; ++y) {
        if (y > 0) sx = std::clamp(sx + uniform_int(rng, -1, 1), 1, w - 2);
        const std::size_t i = l.index(sx, y);
        l.cells[i].cover = Cover::Water;
        l.cells[i].slope = 0.0;
        assigned[i] = 1;
        l.streams.push_back({sx, y});
    }

    // Road: left to right through the valley.
    std::vector<int> road_y(w);
    int ry = uniform_int(rng, h / 4, (3 * h) / 4);
    for (int x = 0; x < w; ++x) {
        if (x > 0) ry = std::clamp(ry + uniform_int(rng, -1, 1), 2, h - 3);
        road_y[x] = ry;
        const std::size_t i = l.index(x, ry);
        if (l.cells[i].cover != Cover::Water) {
            l.cells[i].cover = Cover::Builtup;
            l.cells[i].slope = std::min(l.cells[i].slope, 5.0);
        }
        assigned[i] = 1;
        l.roads.push_back({x, ry});
    }

    // Settlements sit beside the road at even spacing.
    const int r = config.settlement_radius;
    std::vector<char> core(n, 0);
    for (int k = 0; k < config.settlements; ++k) {
        const int cx = std::clamp(static_cast<int>((k + 0.5) * w / config.settlements), r, w - 1 - r);
        const int side = uniform01(rng) < 0.5 ? -1 : 1;
        const int cy = std::clamp(road_y[cx] + side * (r + 1), r, h - 1 - r);
        l.settlements.push_back({cx, cy});
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                const std::size_t i = l.index(cx + dx, cy + dy);
                if (l.cells[i].cover == Cover::Water) continue;
                l.cells[i].cover = Cover::Builtup;
                l.cells[i].slope = std::min(l.cells[i].slope, 5.0);
                assigned[i] = 1;
                core[i] = 1;
            }
        }
        core[l.index(cx, cy)] = 1;
    }
    const auto dist_core = distance_field(w, h, core);

    auto take = [&](std::vector<std::size_t>& order, std::size_t& cursor, Cover cover,
                    std::size_t count) {
        std::size_t done = 0;
        while (done < count && cursor < order.size()) {
            const std::size_t i = order[cursor++];
            if (assigned[i]) continue;
            l.cells[i].cover = cover;
            assigned[i] = 1;
            ++done;
        }
    };
    auto target = [&](Cover c) {
        return static_cast<std::size_t>(std::llround(config.fractions[static_cast<int>(c)] * n));
    };

    // Farmland rings around settlement cores, flatter cells first at equal distance.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ka = dist_core[a] + l.cells[a].slope / 60.0;
        const double kb = dist_core[b] + l.cells[b].slope / 60.0;
        return ka < kb;
    });
    std::size_t cursor = 0;
    take(order, cursor, Cover::Farmland, target(Cover::Farmland));

    // Remaining vegetation in bands moving away from people, with irregular edges.
    const auto edge_noise = smoothed_noise(w, h, 3, rng);
    const double jitter = 0.15 * (w + h) / 2.0;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dist_core[a] + jitter * edge_noise[a] < dist_core[b] + jitter * edge_noise[b];
    });
    cursor = 0;
    for (Cover c : {Cover::Grassland, Cover::Shrub, Cover::Forest, Cover::Bamboo})
        take(order, cursor, c, target(c));
    // Anything left over stays Bare.

    for (std::size_t i = 0; i < n; ++i) {
        Cell& c = l.cells[i];
        c.firewood_stock = l.stock_capacity(c.cover);
        if (c.cover == Cover::Farmland) {
            c.cultivated = true;
            c.disturbance_age = 0;
            // Owner: nearest settlement core center.
            const Coord p = l.coord(i);
            long best = std::numeric_limits<long>::max();
            for (std::size_t s = 0; s < l.settlements.size(); ++s) {
                const long dx = p.x - l.settlements[s].x;
                const long dy = p.y - l.settlements[s].y;
                const long d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    c.settlement = static_cast<int>(s);
                }
            }
        }
    }

    l.refresh_static_distances();
    return l;
}

void step_succession(Landscape& landscape) {
    for (auto& c : landscape.cells) {
        c.succession_age += 1;
        switch (c.cover) {
        case Cover::Farmland:
            if (c.abandoned) {
                c.cover = Cover::Grassland;
                c.succession_age = 1;  // the conversion year counts as the first grass year
                c.abandoned = false;
                c.cultivated = false;
                c.settlement = -1;
            }
            break;
        case Cover::Grassland:
            if (c.succession_age >= landscape.grass_dwell) {
                c.cover = Cover::Shrub;
                c.succession_age = 0;
            }
            break;
        case Cover::Shrub:
            if (c.succession_age >= landscape.shrub_dwell) {
                c.cover = Cover::Forest;
                c.succession_age = 0;
            }
            break;
        default: break;
        }
    }
}

void age_disturbance(Landscape& landscape) {
    for (auto& c : landscape.cells)
        if (c.disturbance_age != kNeverDisturbed) ++c.disturbance_age;
}

HabitatWeights HabitatWeights::single(HabitatFactor f) {
    HabitatWeights hw;
    hw.w.fill(0.0);
    hw.w[static_cast<int>(f)] = 1.0;
    return hw;
}

void HabitatWeights::validate() const {
    double sum = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) throw ConfigError("habitat weights must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("habitat weights must sum to 1");
}

std::array<double, kHabitatFactors> cell_suitability(const Landscape& l, const SuitabilityParams& p,
                                                     std::size_t i, double farmland_distance) {
    const Cell& c = l.cells[i];
    std::array<double, kHabitatFactors> s{};
    s[static_cast<int>(HabitatFactor::Slope)] = ramp_down(c.slope, p.slope_full, p.slope_zero);
    s[static_cast<int>(HabitatFactor::StreamProximity)] =
        ramp_down(l.dist_stream[i], p.stream_peak, p.stream_zero);
    const bool disturbed = c.disturbance_age < p.disturbance_window;
    s[static_cast<int>(HabitatFactor::LandCover)] =
        p.cover[static_cast<int>(c.cover)] * (disturbed ? 1.0 - p.disturbance_penalty : 1.0);
    s[static_cast<int>(HabitatFactor::Bamboo)] =
        std::max(0.0, 1.0 - l.dist_bamboo[i] / p.bamboo_radius);
    s[static_cast<int>(HabitatFactor::RoadDistance)] = ramp_up(l.dist_road[i], p.distance_radius);
    s[static_cast<int>(HabitatFactor::FarmlandDistance)] =
        ramp_up(farmland_distance, p.distance_radius);
    s[static_cast<int>(HabitatFactor::SettlementDistance)] =
        ramp_up(l.dist_settlement[i], p.distance_radius);
    return s;
}

HabitatReport compute_habitat_quality(const Landscape& l, const HabitatWeights& weights,
                                      const SuitabilityParams& params, double reference_index) {
    weights.validate();
    const std::size_t n = l.size();
    std::vector<char> farm(n, 0);
    for (std::size_t i = 0; i < n; ++i) farm[i] = l.cells[i].cover == Cover::Farmland;
    const auto dist_farm = distance_field(l.width, l.height, farm);

    HabitatReport report;
    report.per_cell.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = cell_suitability(l, params, i, dist_farm[i]);
        double score = 0.0;
        for (int k = 0; k < kHabitatFactors; ++k) score += weights.w[k] * s[k];
        report.per_cell[i] = std::clamp(score, 0.0, 1.0);
        report.index += report.per_cell[i];
    }
    report.mean = n ? report.index / static_cast<double>(n) : 0.0;
    report.normalized = reference_index > 0.0 ? report.index / reference_index : 1.0;
    return report;
}

}  // namespace pandasim
