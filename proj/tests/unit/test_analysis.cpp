#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "oracles.hpp"
#include "pandasim/analysis.hpp"
#include "pandasim/error.hpp"
#include "pandasim/fixtures.hpp"

using namespace pandasim;

namespace {

ParetoPoint pt(double carbon, double habitat, double econ, double g2g = 0, double price = 0.65) {
    ParetoPoint p;
    p.scenario = PolicyScenario(g2g, price);
    p.objectives = {carbon, habitat, econ};
    return p;
}

std::vector<oracle::Triple> triples(const std::vector<ParetoPoint>& pts) {
    std::vector<oracle::Triple> t;
    for (const auto& p : pts)
        t.push_back({p.objectives.carbon_kg, p.objectives.habitat_index, p.objectives.gross_economic_benefits});
    return t;
}

std::vector<ParetoPoint> from_triples(const std::vector<oracle::Triple>& t) {
    std::vector<ParetoPoint> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        out.push_back(pt(t[i].carbon, t[i].habitat, t[i].econ, static_cast<double>(i), 0.65));
    return out;
}

FittedSurrogate raw(SurrogateForm form, std::vector<double> coef) {
    FittedSurrogate m;
    m.form = form;
    m.coefficients = std::move(coef);
    return m;
}

// Published habitat cubic, treated here as a raw-unit polynomial.
const std::vector<double> kHabitatBeta{-0.9578, 1.5254, 0.0776, 1.5801, -0.0047,
                                       0.0403,  0.4903, -0.0082, 0.0200, -0.0423};

double cubic(const std::vector<double>& b, double x, double y) {
    return b[0] + b[1] * x + b[2] * y + b[3] * x * x + b[4] * x * y + b[5] * y * y + b[6] * x * x * x +
           b[7] * x * x * y + b[8] * x * y * y + b[9] * y * y * y;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("dominance examples") {
    const auto a = pt(10, 5, 7), b = pt(8, 6, 9), c = pt(12, 4, 6);
    const auto f = pareto_frontier({a, b, c});
    REQUIRE(f.size() == 1);
    CHECK(f[0].objectives.carbon_kg == 8);
    const auto g = pareto_frontier({pt(8, 6, 3), pt(10, 7, 2)});
    CHECK(g.size() == 2);
    CHECK(dominates(b.objectives, a.objectives));
    CHECK_FALSE(dominates(a.objectives, a.objectives));
}

TEST_CASE("duplicates all stay on the frontier") {
    const auto f = frontier_mask({pt(1, 1, 1), pt(1, 1, 1), pt(2, 1, 1)});
    CHECK(f == std::vector<bool>{true, true, false});
}

TEST_CASE("frontier errors") {
    CHECK_THROWS_AS(pareto_frontier({}), DomainError);
    CHECK_THROWS_AS(pareto_frontier({pt(NAN, 1, 1)}), DomainError);
}

TEST_CASE("frontier equals the pairwise oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 1000);
    std::uniform_int_distribution<int> levels(2, 40);
    for (int k = 0; k < 200; ++k) {
        const auto t = oracle::random_triples(rng, size(rng), levels(rng));
        CHECK(frontier_mask(from_triples(t)) == oracle::brute_force_frontier(t));
    }
    // Continuous values on 273 points.
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<oracle::Triple> t(273);
    for (auto& x : t) x = {u(rng), u(rng), u(rng)};
    CHECK(frontier_mask(from_triples(t)) == oracle::brute_force_frontier(t));
}

TEST_CASE("frontier is invariant to positive rescaling") {
    std::mt19937_64 rng(8);
    const auto t = oracle::random_triples(rng, 300, 12);
    auto scaled = t;
    for (auto& x : scaled) {
        x.carbon = 3.5 * x.carbon + 100;
        x.habitat = 0.01 * x.habitat;
        x.econ = 1e6 * x.econ - 7;
    }
    CHECK(frontier_mask(from_triples(t)) == frontier_mask(from_triples(scaled)));
}

TEST_CASE("quartile labels") {
    std::vector<ParetoPoint> f;
    for (int h = 0; h < 4; ++h) f.push_back(pt(5, h, 3));
    const auto l = quartile_labels(f);
    for (int h = 0; h < 4; ++h) {
        CHECK(l[h][1] == static_cast<Label>(h));
        CHECK(l[h][0] == Label::PlusPlus);  // degenerate range
        CHECK(l[h][2] == Label::PlusPlus);
    }
    CHECK(std::string(label_text(Label::MinusMinus)) == "--");
    CHECK(std::string(label_text(Label::PlusPlus)) == "++");
    // Carbon is minimized: the lowest footprint earns '++'.
    const auto c = quartile_labels({pt(1, 0, 0), pt(4, 1, 1)});
    CHECK(c[0][0] == Label::PlusPlus);
    CHECK(c[1][0] == Label::MinusMinus);
}

TEST_CASE("reference frontier fixture carries the published labels") {
    // price, g2g, econ, carbon, habitat
    struct Row { double price; double g2g; const char* econ; const char* carbon; const char* habitat; };
    const Row rows[] = {
        {0.35, 900, "--", "++", "+"},   {0.25, 600, "--", "++", "-"},   {0.20, 1800, "--", "++", "++"},
        {0.55, 400, "-", "++", "--"},   {0.55, 1700, "-", "+", "++"},   {0.25, 1700, "-", "++", "++"},
        {0.60, 1800, "-", "++", "+"},   {0.65, 2000, "+", "++", "--"},  {0.55, 1800, "+", "++", "+"},
        {0.65, 1900, "+", "+", "++"},   {0.55, 100, "+", "+", "--"},    {0.40, 1900, "+", "+", "++"},
        {0.55, 200, "+", "+", "--"},    {0.35, 2000, "+", "-", "++"},   {0.20, 0, "++", "+", "--"},
        {0.35, 0, "++", "+", "--"},     {0.35, 100, "++", "--", "--"},  {0.65, 0, "++", "--", "--"},
    };
    const auto fixture = reference_frontier_fixture();
    REQUIRE(fixture.size() == 18);
    CHECK(frontier_mask(fixture) == std::vector<bool>(18, true));
    const auto labels = quartile_labels(fixture);
    const auto declared = reference_frontier_labels();
    int matched = 0;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < fixture.size(); ++i) {
            if (!(fixture[i].scenario == PolicyScenario(r.g2g, r.price))) continue;
            ++matched;
            CHECK(std::string(label_text(labels[i][2])) == r.econ);
            CHECK(std::string(label_text(labels[i][0])) == r.carbon);
            CHECK(std::string(label_text(labels[i][1])) == r.habitat);
            CHECK(declared[i] == labels[i]);
        }
    }
    CHECK(matched == 18);
}

TEST_CASE("published surrogate values") {
    const auto g = raw(SurrogateForm::G2GBudget, {1.8845, 0.0047, 226620.6});
    CHECK(oracle::rel_err(eval_surrogate(g, 0, 0), 226622.4845) <= 1e-12);
    const double at1000 = 1.8845 * std::exp(0.0047 * 1000.0) + 226620.6;
    CHECK(oracle::rel_err(eval_surrogate(g, 1000, 0), at1000) <= 1e-12);
    CHECK(oracle::rel_err(eval_surrogate(g, 1000, 0), 226827.8) <= 1e-6);
    const auto f = raw(SurrogateForm::F2EBudget, {1.9104e-8, 0.5094, -824291.4});
    CHECK(eval_surrogate(f, 0, 0) == -824291.4);
    CHECK(oracle::rel_err(eval_surrogate(f, 100, 2e7), 1.9104e-8 * 4e14 + 0.5094 * 100 - 824291.4) <= 1e-12);
    const auto fx2 = raw(SurrogateForm::F2EBudgetLinearX2, {1.9104e-8, 0.5094, -824291.4});
    CHECK(oracle::rel_err(eval_surrogate(fx2, 100, 2e7), 1.9104e-8 * 4e14 + 0.5094 * 2e7 - 824291.4) <= 1e-12);
    const auto h = raw(SurrogateForm::HabitatCubic, kHabitatBeta);
    CHECK(eval_surrogate(h, 0.7, -1.2) == doctest::Approx(cubic(kHabitatBeta, 0.7, -1.2)).epsilon(1e-12));
}

TEST_CASE("standardized inputs") {
    auto m = raw(SurrogateForm::EconQuadratic, {1, 2, 3, 0, 0, 0});
    m.x1_center = 100;
    m.x1_scale = 10;
    m.x2_center = -5;
    m.x2_scale = 2;
    CHECK(eval_surrogate(m, 120, -1) == doctest::Approx(1 + 2 * 2 + 3 * 2));
}

TEST_CASE("noiseless quadratic is recovered") {
    const std::vector<double> beta{2.0, -1.5, 0.75, 0.3, -0.2, 0.05};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    std::vector<Sample> s;
    for (int k = 0; k < 120; ++k) {
        const double x = u(rng), y = u(rng);
        s.push_back({x, y, beta[0] + beta[1] * x + beta[2] * y + beta[3] * x * x + beta[4] * x * y + beta[5] * y * y});
    }
    FitOptions opt;
    opt.standardize = false;
    const auto m = fit_surrogate(s, SurrogateForm::EconQuadratic, opt);
    for (std::size_t i = 0; i < beta.size(); ++i) CHECK(oracle::rel_err(m.coefficients[i], beta[i]) <= 1e-6);
    CHECK(m.train_r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.test_r2 == doctest::Approx(1.0).epsilon(1e-9));
    // Standardized fit predicts the same surface.
    const auto z = fit_surrogate(s, SurrogateForm::EconQuadratic);
    for (const auto& p : s) CHECK(eval_surrogate(z, p.x1, p.x2) == doctest::Approx(p.y).epsilon(1e-8));
}

TEST_CASE("exponential budget rate is recovered under noise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 2500);
    std::normal_distribution<double> noise(0, 0.01);
    std::vector<Sample> s;
    for (int k = 0; k < 250; ++k) {
        const double x = u(rng);
        const double y = 1.8845 * std::exp(0.0047 * x) + 226620.6;
        s.push_back({x, 0.0, y * (1.0 + noise(rng))});
    }
    const auto m = fit_surrogate(s, SurrogateForm::G2GBudget);
    CHECK(std::fabs(m.coefficients[1] - 0.0047) <= 0.1 * 0.0047);
    CHECK(m.train_r2 > 0.5);
}

TEST_CASE("constant target has zero R2") {
    CHECK(r_squared({5, 5, 5}, {5, 5, 5}) == 0.0);
    CHECK(r_squared({1, 2, 3}, {1, 2, 3}) == 1.0);
    std::vector<Sample> s;
    for (int k = 0; k < 40; ++k) s.push_back({double(k), double(k % 7), 5.0});
    const auto m = fit_surrogate(s, SurrogateForm::F2EBudget);
    CHECK(m.train_r2 == 0.0);
    CHECK(m.test_r2 == 0.0);
}

TEST_CASE("fit errors") {
    std::vector<Sample> few{{0, 0, 1}, {1, 1, 2}};
    CHECK_THROWS_AS(fit_surrogate(few, SurrogateForm::HabitatCubic), FitError);
    std::vector<Sample> flat;
    for (int k = 0; k < 40; ++k) flat.push_back({1.0, 2.0, double(k)});
    CHECK_THROWS_AS(fit_surrogate(flat, SurrogateForm::HabitatQuadratic), FitError);
    std::vector<Sample> bad;
    for (int k = 0; k < 40; ++k) bad.push_back({double(k), double(k * k % 11), k == 3 ? NAN : 1.0});
    CHECK_THROWS_AS(fit_surrogate(bad, SurrogateForm::EconQuadratic), FitError);
}

TEST_CASE("cubic fits at least as well as quadratic on the training split") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 3000), v(1e6, 9e6);
    std::normal_distribution<double> noise(0, 50);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Sample> s;
        for (int k = 0; k < 100; ++k) {
            const double x = u(rng), y = v(rng);
            s.push_back({x, y, 5000 + std::sin(x / 700) * 300 + y * 1e-4 + noise(rng)});
        }
        FitOptions opt;
        opt.seed = 100 + rep;
        const auto c = fit_surrogate(s, SurrogateForm::HabitatCubic, opt);
        const auto q = fit_surrogate(s, SurrogateForm::HabitatQuadratic, opt);
        CHECK(c.train_r2 >= q.train_r2 - 1e-12);
    }
}

TEST_CASE("form names round-trip") {
    for (auto f : {SurrogateForm::G2GBudget, SurrogateForm::F2EBudget, SurrogateForm::F2EBudgetLinearX2,
                   SurrogateForm::HabitatCubic, SurrogateForm::HabitatQuadratic, SurrogateForm::EconQuadratic})
        CHECK(parse_form(form_name(f)) == f);
    CHECK(coefficient_count(SurrogateForm::HabitatCubic) == 10);
    CHECK(coefficient_count(SurrogateForm::EconQuadratic) == 6);
}

TEST_CASE("budget line") {
    const auto g = raw(SurrogateForm::G2GBudget, {1.8845, 0.0047, 226620.6});
    const auto f = raw(SurrogateForm::F2EBudgetLinearX2, {1e-8, 0.05, 0.0});
    std::vector<double> grid;
    for (int k = 0; k <= 100; ++k) grid.push_back(1e5 * k);
    // Cheapest point of the domain is above this budget.
    CHECK(budget_line(1000.0, g, f, grid, 2500).empty());

    const double budget = 1.5e6;
    const auto line = budget_line(budget, g, f, grid, 2500);
    CHECK(line.size() >= 5);
    std::map<double, int> per_x2;
    for (const auto& p : line) {
        ++per_x2[p.x2];
        CHECK(p.x1 >= 0.0);
        CHECK(p.x1 <= 2500.0);
        const double sum = eval_surrogate(g, p.x1, p.x2) + eval_surrogate(f, p.x1, p.x2);
        CHECK(std::fabs(sum - budget) / budget < 1e-6);
    }
    for (const auto& [x2, n] : per_x2) CHECK(n == 1);
}

TEST_CASE("indifference curve of a pure square") {
    auto m = raw(SurrogateForm::EconQuadratic, {0, 0, 0, 1, 0, 0});
    const std::vector<double> grid{-1, 0, 1, 2};
    const auto c = indifference_curve(m, 4.0, grid, 0.0, 5.0);
    REQUIRE(c.size() == grid.size());
    for (const auto& p : c) CHECK(p.x1 == doctest::Approx(2.0).epsilon(1e-10));
    // Both branches when the domain allows negatives.
    CHECK(indifference_curve(m, 4.0, {0.0}, -5.0, 5.0).size() == 2);
    // Above the maximum on the domain.
    CHECK(indifference_curve(m, 100.0, grid, 0.0, 5.0).empty());
}

TEST_CASE("habitat cubic curve passes through its own level point") {
    const auto m = raw(SurrogateForm::HabitatCubic, kHabitatBeta);
    const double level = cubic(kHabitatBeta, 1.0, 1.0);
    const auto c = indifference_curve(m, level, {0.5, 1.0, 1.5}, -3.0, 3.0);
    bool through = false;
    for (const auto& p : c) {
        CHECK(std::fabs(cubic(kHabitatBeta, p.x1, p.x2) - level) < 1e-8);
        if (p.x2 == 1.0 && std::fabs(p.x1 - 1.0) < 1e-8) through = true;
    }
    CHECK(through);
}

TEST_CASE("posterior selection on the reference fixture") {
    const auto fixture = reference_frontier_fixture();
    PosteriorQuery q;
    q.budget_cap = 5e6;
    q.min_reverted_area_mu = 2500;
    q.weights = {0.4, 0.4, 0.2};
    const auto ranked = posterior_select(fixture, q);
    REQUIRE_FALSE(ranked.empty());
    CHECK(ranked.front().point.scenario == PolicyScenario(900, 0.35));
}

TEST_CASE("posterior selection reduces to a single objective") {
    const auto fixture = reference_frontier_fixture();
    PosteriorQuery q;
    q.weights = {0, 0, 1};
    const auto ranked = posterior_select(fixture, q);
    REQUIRE(ranked.size() == fixture.size());
    double best = -INFINITY;
    for (const auto& p : fixture) best = std::max(best, p.objectives.gross_economic_benefits);
    CHECK(ranked.front().point.objectives.gross_economic_benefits == best);
    for (std::size_t i = 1; i < ranked.size(); ++i) CHECK(ranked[i - 1].score >= ranked[i].score);
}

TEST_CASE("posterior selection: infeasible budget and bad queries") {
    std::vector<ParetoPoint> fixture;
    for (const auto& p : reference_frontier_fixture())
        if (p.direct.financial_burden > 0.0) fixture.push_back(p);
    double cheapest = INFINITY;
    for (const auto& p : fixture) cheapest = std::min(cheapest, p.direct.financial_burden);
    PosteriorQuery q;
    q.budget_cap = 0.5 * cheapest;
    CHECK(posterior_select(fixture, q).empty());
    q.budget_cap = 0.0;
    CHECK_THROWS_AS(posterior_select(fixture, q), DomainError);
    q.budget_cap = 1e9;
    q.weights = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(posterior_select(fixture, q), DomainError);
    q.weights = {-0.5, 1.0, 0.5};
    CHECK_THROWS_AS(posterior_select(fixture, q), DomainError);
    CHECK_THROWS_AS(posterior_select({}, PosteriorQuery{}), DomainError);
}

TEST_CASE("posterior survivors grow with the budget and shrink with the target") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<ParetoPoint> f;
    for (int k = 0; k < 60; ++k) {
        auto p = pt(u(rng), u(rng), u(rng), 100.0 * k, 0.65);
        p.direct.financial_burden = 1e7 * u(rng);
        p.direct.reverted_area_mu = 4000 * u(rng);
        f.push_back(p);
    }
    auto ids = [](const std::vector<RankedPoint>& r) {
        std::vector<std::string> s;
        for (const auto& x : r) s.push_back(x.point.scenario.id());
        std::sort(s.begin(), s.end());
        return s;
    };
    for (int k = 0; k < 50; ++k) {
        PosteriorQuery a;
        a.budget_cap = 1e7 * u(rng) + 1;
        a.min_reverted_area_mu = 4000 * u(rng);
        PosteriorQuery b = a;
        b.budget_cap = a.budget_cap * (1 + u(rng));
        b.min_reverted_area_mu = a.min_reverted_area_mu * u(rng);
        const auto small = ids(posterior_select(f, a));
        const auto large = ids(posterior_select(f, b));
        CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    }
}

TEST_CASE("ties prefer the cheaper scenario") {
    auto a = pt(1, 1, 1, 500, 0.4);
    auto b = pt(1, 1, 1, 300, 0.4);
    a.direct.financial_burden = 10;
    b.direct.financial_burden = 20;
    auto r = posterior_select({b, a}, PosteriorQuery{});
    CHECK(r.front().point.scenario == a.scenario);
    b.direct.financial_burden = 10;
    r = posterior_select({a, b}, PosteriorQuery{});
    CHECK(r.front().point.scenario == b.scenario);
}

}  // TEST_SUITE
