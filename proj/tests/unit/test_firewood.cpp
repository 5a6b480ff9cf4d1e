#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "pandasim/error.hpp"
#include "pandasim/firewood.hpp"

using namespace pandasim;

namespace {

Landscape stocked(int w, int h, std::int64_t stock) {
    Landscape l = make_blank_landscape(w, h);
    for (auto& c : l.cells) {
        c.cover = Cover::Forest;
        c.firewood_stock = stock;
    }
    return l;
}

bool eight_connected(const Landscape& l, const std::vector<std::size_t>& path) {
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Coord a = l.coord(path[k - 1]);
        const Coord b = l.coord(path[k]);
        if (std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) != 1) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("firewood") {

TEST_CASE("uniform stock against the threshold") {
    const Landscape l = stocked(10, 10, 100);
    const auto all = designate_zones(l, 5, 50.0);
    CHECK(all.block_means.size() == 4);
    for (char d : all.designated) CHECK(d);
    const auto none = designate_zones(l, 5, 100.0);
    for (char d : none.designated) CHECK_FALSE(d);
    CHECK_FALSE(none.any());
}

TEST_CASE("checkerboard block means") {
    Landscape l = stocked(6, 6, 0);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) l.at(x, y).firewood_stock = (x + y) % 2 ? 200 : 0;
    const auto z = designate_zones(l, 2, 50.0);
    REQUIRE(z.block_means.size() == 9);
    for (double m : z.block_means) CHECK(m == 100.0);
    for (char d : z.designated) CHECK(d);
    // Partial edge blocks average over their own cells only.
    const Landscape odd = stocked(5, 5, 40);
    const auto e = designate_zones(odd, 2, 10.0);
    CHECK(e.blocks_x == 3);
    for (double m : e.block_means) CHECK(m == 40.0);
}

TEST_CASE("cost distance on flat ground is octile") {
    Landscape l = stocked(12, 12, 0);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) l.at(x, y).firewood_stock = 5000;
    const auto z = designate_zones(l, 3, 2000.0);
    const auto d = zone_cost_distance(l, z, 0.1);
    CHECK(d[l.index(1, 1)] == 0.0);
    CHECK(d[l.index(8, 2)] == doctest::Approx(6.0));
    CHECK(d[l.index(8, 8)] == doctest::Approx(6.0 * std::sqrt(2.0)));
}

TEST_CASE("start inside a zone is already arrived") {
    const Landscape l = stocked(10, 10, 5000);
    const auto z = designate_zones(l, 5, 2000.0);
    Rng rng = make_stream(1, 3);
    const auto r = search_path(l.index(3, 3), z, l, FirewoodParams{}, rng);
    CHECK(r.status == PathStatus::Arrived);
    CHECK(r.path == std::vector<std::size_t>{l.index(3, 3)});
}

TEST_CASE("no designated zone") {
    const Landscape l = stocked(10, 10, 0);
    const auto z = designate_zones(l, 5, 2000.0);
    Rng rng = make_stream(1, 3);
    const auto r = search_path(0, z, l, FirewoodParams{}, rng);
    CHECK(r.status == PathStatus::NoZone);
    CHECK(r.path.empty());
}

TEST_CASE("flat ground: the single zone is always reached") {
    Landscape l = stocked(30, 30, 0);
    for (int y = 20; y < 25; ++y)
        for (int x = 20; x < 25; ++x) l.at(x, y).firewood_stock = 5000;
    const auto z = designate_zones(l, 5, 2000.0);
    const auto d = zone_cost_distance(l, z, 0.1);
    const FirewoodParams params;
    int arrived = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Rng rng = make_stream(trial, 3);
        const std::size_t start = l.index(uniform_int(rng, 0, 14), uniform_int(rng, 0, 14));
        const auto r = search_path(start, z, d, l, params, rng);
        CHECK(eight_connected(l, r.path));
        CHECK(r.path.size() - 1 <= static_cast<std::size_t>(params.step_limit(l)));
        if (r.status == PathStatus::Arrived && z.cell_designated(l, r.path.back())) ++arrived;
    }
    CHECK(arrived == 1000);
}

TEST_CASE("paths prefer the flat route over a ridge") {
    Landscape l = stocked(25, 5, 0);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) l.at(x, y).firewood_stock = 3000;
        for (int x = 20; x < 25; ++x) l.at(x, y).firewood_stock = 3000;
        for (int x = 16; x <= 18; ++x) l.at(x, y).slope = 45.0;
    }
    const auto z = designate_zones(l, 5, 2000.0);
    const auto d = zone_cost_distance(l, z, 0.1);
    int flat = 0, ridge = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Rng rng = make_stream(trial, 3);
        const auto r = search_path(l.index(12, 2), z, d, l, FirewoodParams{}, rng);
        if (r.status != PathStatus::Arrived) continue;
        (l.coord(r.path.back()).x < 5 ? flat : ridge)++;
    }
    CHECK(flat + ridge > 900);
    CHECK(flat > 700);
}

TEST_CASE("timeout is explicit") {
    Landscape l = stocked(60, 3, 0);
    for (int y = 0; y < 3; ++y) l.at(59, y).firewood_stock = 5000;
    const auto z = designate_zones(l, 1, 2000.0);
    FirewoodParams p;
    p.max_steps = 5;
    Rng rng = make_stream(0, 3);
    const auto r = search_path(l.index(0, 1), z, l, p, rng);
    CHECK(r.status == PathStatus::Timeout);
    CHECK(r.path.size() == 6);
    CHECK(eight_connected(l, r.path));
}

TEST_CASE("zero demand harvests nothing") {
    Landscape l = stocked(5, 5, 100);
    Rng rng = make_stream(0, 3);
    const auto t = collect(12, 0, l, 50, rng);
    CHECK(t.harvested_cells.empty());
    CHECK(t.total_kg == 0);
    for (const auto& c : l.cells) {
        CHECK(c.firewood_stock == 100);
        CHECK(c.disturbance_age == kNeverDisturbed);
    }
}

TEST_CASE("entry cell alone can satisfy demand") {
    Landscape l = stocked(5, 5, 100);
    l.cells[12].firewood_stock = 900;
    Rng rng = make_stream(0, 3);
    const auto t = collect(12, 600, l, 50, rng);
    REQUIRE(t.harvested_cells.size() == 1);
    CHECK(t.harvested_cells[0].cell == 12);
    CHECK(t.total_kg == 600);
    CHECK(l.cells[12].firewood_stock == 300);
    CHECK(l.cells[12].disturbance_age == 0);
}

TEST_CASE("five full cells for five hundred kilograms") {
    for (int seed = 0; seed < 200; ++seed) {
        Landscape l = stocked(20, 20, 100);
        const auto before = l.total_stock();
        Rng rng = make_stream(seed, 3);
        const auto t = collect(l.index(10, 10), 500, l, 1000, rng);
        CHECK(t.total_kg == 500);
        CHECK(t.unmet_kg() == 0);
        REQUIRE(t.harvested_cells.size() == 5);
        for (const auto& h : t.harvested_cells) {
            CHECK(h.kg == 100);
            CHECK(l.cells[h.cell].firewood_stock == 0);
        }
        CHECK(before - l.total_stock() == 500);
    }
}

TEST_CASE("negative demand is rejected") {
    Landscape l = stocked(3, 3, 10);
    Rng rng = make_stream(0, 3);
    CHECK_THROWS_AS(collect(0, -1, l, 10, rng), DomainError);
}

TEST_CASE("replenishment every fourth year") {
    Landscape l = stocked(4, 4, 0);
    l.cells[0].cover = Cover::Shrub;
    l.cells[1].cover = Cover::Farmland;
    l.cells[1].firewood_stock = 0;
    l.cells[2].firewood_stock = 123;
    Landscape three = l;
    replenish_stocks(three, 3);
    for (std::size_t i = 0; i < l.size(); ++i) CHECK(three.cells[i].firewood_stock == l.cells[i].firewood_stock);
    replenish_stocks(l, 4);
    CHECK(l.cells[0].firewood_stock == l.shrub_stock);
    CHECK(l.cells[1].firewood_stock == 0);
    for (std::size_t i = 2; i < l.size(); ++i) CHECK(l.cells[i].firewood_stock == l.forest_stock);
}

}  // TEST_SUITE
