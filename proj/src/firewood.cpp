#include "pandasim/firewood.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "pandasim/error.hpp"

namespace pandasim {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

double step_cost(const Landscape& l, std::size_t to, int dir, double slope_cost) {
    const bool diagonal = kDx[dir] != 0 && kDy[dir] != 0;
    return (1.0 + slope_cost * l.cells[to].slope) * (diagonal ? kSqrt2 : 1.0);
}

// Visited marks reused across calls on the same thread.
class VisitMarks {
public:
    void reset(std::size_t n) {
        if (stamps_.size() != n) {
            stamps_.assign(n, 0);
            epoch_ = 0;
        }
        if (++epoch_ == 0) {
            std::fill(stamps_.begin(), stamps_.end(), 0);
            epoch_ = 1;
        }
    }
    void mark(std::size_t i) { stamps_[i] = epoch_; }
    bool seen(std::size_t i) const { return stamps_[i] == epoch_; }

private:
    std::vector<std::uint32_t> stamps_;
    std::uint32_t epoch_ = 0;
};

}  // namespace

void FirewoodParams::validate() const {
    if (block_size < 1) throw ConfigError("firewood: block_size must be >= 1");
    if (slope_cost < 0.0 || goal_bias < 0.0) throw ConfigError("firewood: costs must be >= 0");
    if (!(visited_damping > 0.0 && visited_damping <= 1.0))
        throw ConfigError("firewood: visited_damping must lie in (0, 1]");
    if (replenish_period < 1) throw ConfigError("firewood: replenish_period must be >= 1");
}

int ZoneMap::block_of(const Landscape& l, std::size_t cell) const {
    const Coord c = l.coord(cell);
    return (c.y / block_size) * blocks_x + (c.x / block_size);
}

bool ZoneMap::any() const {
    return std::any_of(designated.begin(), designated.end(), [](char d) { return d != 0; });
}

ZoneMap designate_zones(const Landscape& l, int block_size, double threshold_kg) {
    if (block_size < 1) throw DomainError("designate_zones: block_size must be >= 1");
    ZoneMap z;
    z.block_size = block_size;
    z.blocks_x = (l.width + block_size - 1) / block_size;
    z.blocks_y = (l.height + block_size - 1) / block_size;
    const std::size_t nb = static_cast<std::size_t>(z.blocks_x) * z.blocks_y;
    std::vector<double> sum(nb, 0.0);
    std::vector<int> count(nb, 0);
    for (std::size_t i = 0; i < l.size(); ++i) {
        const auto b = static_cast<std::size_t>(z.block_of(l, i));
        sum[b] += static_cast<double>(l.cells[i].firewood_stock);
        count[b] += 1;
    }
    z.block_means.resize(nb);
    z.designated.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        z.block_means[b] = sum[b] / count[b];
        z.designated[b] = z.block_means[b] > threshold_kg;
    }
    return z;
}

std::vector<double> zone_cost_distance(const Landscape& l, const ZoneMap& zones, double slope_cost) {
    const std::size_t n = l.size();
    std::vector<double> d(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    std::vector<char> inside(n, 0);
    for (std::size_t i = 0; i < n; ++i) inside[i] = zones.cell_designated(l, i);
    for (std::size_t i = 0; i < n; ++i) {
        if (!inside[i]) continue;
        d[i] = 0.0;
        // Interior zone cells cannot improve anything a boundary cell does not.
        const Coord c = l.coord(i);
        bool boundary = false;
        for (int dir = 0; dir < 8 && !boundary; ++dir) {
            const int x = c.x + kDx[dir];
            const int y = c.y + kDy[dir];
            boundary = l.in_bounds(x, y) && !inside[l.index(x, y)];
        }
        if (boundary) queue.push({0.0, i});
    }
    while (!queue.empty()) {
        const auto [dist, b] = queue.top();
        queue.pop();
        if (dist > d[b]) continue;
        const Coord cb = l.coord(b);
        for (int dir = 0; dir < 8; ++dir) {
            // Moving from neighbor a into b; the direction a -> b is the reverse of b -> a.
            const int ax = cb.x + kDx[dir];
            const int ay = cb.y + kDy[dir];
            if (!l.in_bounds(ax, ay)) continue;
            const std::size_t a = l.index(ax, ay);
            const double cand = dist + step_cost(l, b, dir, slope_cost);
            if (cand < d[a]) {
                d[a] = cand;
                queue.push({cand, a});
            }
        }
    }
    return d;
}

PathResult search_path(std::size_t start, const ZoneMap& zones, const std::vector<double>& cost_distance,
                       const Landscape& l, const FirewoodParams& params, Rng& rng) {
    PathResult result;
    if (!zones.any()) {
        result.status = PathStatus::NoZone;
        return result;
    }
    result.path.push_back(start);
    if (zones.cell_designated(l, start)) {
        result.status = PathStatus::Arrived;
        return result;
    }

    thread_local VisitMarks visited;
    visited.reset(l.size());
    visited.mark(start);

    const int limit = params.step_limit(l);
    std::size_t cur = start;
    std::array<double, 8> weight{};
    std::array<std::size_t, 8> target{};
    for (int step = 0; step < limit; ++step) {
        const Coord c = l.coord(cur);
        int options = 0;
        double total = 0.0;
        for (int dir = 0; dir < 8; ++dir) {
            const int x = c.x + kDx[dir];
            const int y = c.y + kDy[dir];
            if (!l.in_bounds(x, y)) continue;
            const std::size_t j = l.index(x, y);
            const double sc = step_cost(l, j, dir, params.slope_cost);
            const double detour = std::max(0.0, sc + cost_distance[j] - cost_distance[cur]);
            double w = 1.0 / (sc + params.goal_bias * detour);
            if (visited.seen(j)) w *= params.visited_damping;
            weight[options] = w;
            target[options] = j;
            total += w;
            ++options;
        }
        double pick = uniform01(rng) * total;
        int chosen = options - 1;
        for (int k = 0; k < options; ++k) {
            if (pick < weight[k]) {
                chosen = k;
                break;
            }
            pick -= weight[k];
        }
        cur = target[chosen];
        visited.mark(cur);
        result.path.push_back(cur);
        if (zones.cell_designated(l, cur)) {
            result.status = PathStatus::Arrived;
            return result;
        }
    }
    result.status = PathStatus::Timeout;
    return result;
}

PathResult search_path(std::size_t start, const ZoneMap& zones, const Landscape& l,
                       const FirewoodParams& params, Rng& rng) {
    const auto d = zone_cost_distance(l, zones, params.slope_cost);
    return search_path(start, zones, d, l, params, rng);
}

Trip collect(std::size_t entry, std::int64_t demand_kg, Landscape& l, int max_steps, Rng& rng) {
    if (demand_kg < 0) throw DomainError("collect: demand must be >= 0");
    Trip trip;
    trip.demand_kg = demand_kg;
    std::int64_t remaining = demand_kg;
    auto harvest = [&](std::size_t i) {
        Cell& cell = l.cells[i];
        const std::int64_t take = std::min(cell.firewood_stock, remaining);
        if (take <= 0) return;
        cell.firewood_stock -= take;
        cell.disturbance_age = 0;
        remaining -= take;
        trip.total_kg += take;
        trip.harvested_cells.push_back({i, take});
    };
    if (remaining == 0) return trip;

    std::size_t cur = entry;
    harvest(cur);
    std::array<std::size_t, 8> options{};
    for (int step = 0; step < max_steps && remaining > 0; ++step) {
        const Coord c = l.coord(cur);
        int n = 0;
        for (int dir = 0; dir < 8; ++dir) {
            const int x = c.x + kDx[dir];
            const int y = c.y + kDy[dir];
            if (l.in_bounds(x, y)) options[n++] = l.index(x, y);
        }
        cur = options[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
        harvest(cur);
    }
    return trip;
}

void replenish_stocks(Landscape& l, int years_elapsed, int period) {
    if (years_elapsed <= 0 || period <= 0 || years_elapsed % period != 0) return;
    for (auto& c : l.cells) c.firewood_stock = l.stock_capacity(c.cover);
}

}  // namespace pandasim
