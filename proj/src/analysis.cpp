#include "pandasim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "pandasim/error.hpp"
#include "pandasim/rng.hpp"

namespace pandasim {

// ---------------------------------------------------------------------------
// Objectives

const char* objective_name(Objective o) {
    switch (o) {
        case Objective::Carbon: return "carbon";
        case Objective::Habitat: return "habitat";
        case Objective::Econ: return "econ";
    }
    return "?";
}

double ObjectiveTriple::value(Objective o) const {
    switch (o) {
        case Objective::Carbon: return carbon_kg;
        case Objective::Habitat: return habitat_index;
        case Objective::Econ: return gross_economic_benefits;
    }
    return 0.0;
}

double ObjectiveTriple::goodness(Objective o) const {
    return o == Objective::Carbon ? -carbon_kg : value(o);
}

bool dominates(const ObjectiveTriple& p, const ObjectiveTriple& q) {
    bool strictly = false;
    for (Objective o : kObjectives) {
        const double a = p.goodness(o);
        const double b = q.goodness(o);
        if (a < b) return false;
        if (a > b) strictly = true;
    }
    return strictly;
}

std::vector<bool> frontier_mask(const std::vector<ParetoPoint>& points) {
    if (points.empty()) throw DomainError("pareto_frontier: empty point set");
    for (const auto& p : points)
        for (Objective o : kObjectives)
            if (!std::isfinite(p.objectives.value(o))) throw DomainError("pareto_frontier: non-finite objective");

    // Lexicographically best first; a dominator always precedes what it dominates, so
    // each point only needs checking against the frontier found so far.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (Objective o : kObjectives) {
            const double ga = points[a].objectives.goodness(o);
            const double gb = points[b].objectives.goodness(o);
            if (ga != gb) return ga > gb;
        }
        return false;
    });
    std::vector<bool> mask(points.size(), false);
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
        const auto& t = points[i].objectives;
        const bool dominated = std::any_of(kept.begin(), kept.end(),
                                           [&](std::size_t k) { return dominates(points[k].objectives, t); });
        if (!dominated) {
            kept.push_back(i);
            mask[i] = true;
        }
    }
    return mask;
}

std::vector<ParetoPoint> pareto_frontier(const std::vector<ParetoPoint>& points) {
    const auto mask = frontier_mask(points);
    std::vector<ParetoPoint> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (mask[i]) out.push_back(points[i]);
    return out;
}

ParetoPoint reference_point(const ScenarioResult& result) {
    const YearlyIndicators& y = result.reference_year();
    ParetoPoint p;
    p.scenario = result.scenario;
    p.objectives = {y.carbon_kg, y.habitat_index, y.gross_economic_benefits};
    p.direct = {y.reverted_area_mu, y.electricity_kwh, y.financial_burden, y.g2g_expenditure, y.f2e_subsidy};
    return p;
}

std::vector<ParetoPoint> reference_points(const SweepResult& sweep) {
    std::vector<ParetoPoint> out;
    out.reserve(sweep.results.size());
    for (const auto& r : sweep.results) out.push_back(reference_point(r));
    return out;
}

// ---------------------------------------------------------------------------
// Labels

const char* label_text(Label l) {
    switch (l) {
        case Label::MinusMinus: return "--";
        case Label::Minus: return "-";
        case Label::Plus: return "+";
        case Label::PlusPlus: return "++";
    }
    return "?";
}

std::vector<LabelTriple> quartile_labels(const std::vector<ParetoPoint>& frontier) {
    std::vector<LabelTriple> out(frontier.size());
    for (Objective o : kObjectives) {
        const auto k = static_cast<std::size_t>(o);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& p : frontier) {
            lo = std::min(lo, p.objectives.goodness(o));
            hi = std::max(hi, p.objectives.goodness(o));
        }
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            if (!(hi > lo)) {
                out[i][k] = Label::PlusPlus;
                continue;
            }
            const double pos = (frontier[i].objectives.goodness(o) - lo) / (hi - lo);
            const int bin = std::clamp(static_cast<int>(std::floor(pos * 4.0)), 0, 3);
            out[i][k] = static_cast<Label>(bin);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Surrogates

const char* form_name(SurrogateForm f) {
    switch (f) {
        case SurrogateForm::G2GBudget: return "G2GBudget";
        case SurrogateForm::F2EBudget: return "F2EBudget";
        case SurrogateForm::F2EBudgetLinearX2: return "F2EBudgetLinearX2";
        case SurrogateForm::HabitatCubic: return "HabitatCubic";
        case SurrogateForm::HabitatQuadratic: return "HabitatQuadratic";
        case SurrogateForm::EconQuadratic: return "EconQuadratic";
    }
    return "?";
}

SurrogateForm parse_form(const std::string& name) {
    for (auto f : {SurrogateForm::G2GBudget, SurrogateForm::F2EBudget, SurrogateForm::F2EBudgetLinearX2,
                   SurrogateForm::HabitatCubic, SurrogateForm::HabitatQuadratic, SurrogateForm::EconQuadratic})
        if (name == form_name(f)) return f;
    throw DomainError("unknown surrogate form '" + name + "'");
}

std::size_t coefficient_count(SurrogateForm f) {
    switch (f) {
        case SurrogateForm::G2GBudget:
        case SurrogateForm::F2EBudget:
        case SurrogateForm::F2EBudgetLinearX2: return 3;
        case SurrogateForm::HabitatCubic: return 10;
        case SurrogateForm::HabitatQuadratic:
        case SurrogateForm::EconQuadratic: return 6;
    }
    return 0;
}

bool is_polynomial(SurrogateForm f) {
    return f == SurrogateForm::HabitatCubic || f == SurrogateForm::HabitatQuadratic ||
           f == SurrogateForm::EconQuadratic;
}

namespace {

/// Regressors of the linear forms at standardized inputs.
void basis(SurrogateForm f, double X1, double X2, double* out) {
    switch (f) {
        case SurrogateForm::F2EBudget:
            out[0] = X2 * X2;
            out[1] = X1;
            out[2] = 1.0;
            return;
        case SurrogateForm::F2EBudgetLinearX2:
            out[0] = X2 * X2;
            out[1] = X2;
            out[2] = 1.0;
            return;
        case SurrogateForm::HabitatCubic:
            out[6] = X1 * X1 * X1;
            out[7] = X1 * X1 * X2;
            out[8] = X1 * X2 * X2;
            out[9] = X2 * X2 * X2;
            [[fallthrough]];
        case SurrogateForm::HabitatQuadratic:
        case SurrogateForm::EconQuadratic:
            out[0] = 1.0;
            out[1] = X1;
            out[2] = X2;
            out[3] = X1 * X1;
            out[4] = X1 * X2;
            out[5] = X2 * X2;
            return;
        case SurrogateForm::G2GBudget:
            break;
    }
    throw DomainError("basis: form is not linear in its coefficients");
}

double standardized(double x, double center, double scale) { return (x - center) / scale; }

}  // namespace

double eval_surrogate(const FittedSurrogate& m, double x1, double x2) {
    if (m.coefficients.size() != coefficient_count(m.form))
        throw DomainError(std::string("eval_surrogate: ") + form_name(m.form) + " needs " +
                          std::to_string(coefficient_count(m.form)) + " coefficients");
    const auto& c = m.coefficients;
    const double X1 = standardized(x1, m.x1_center, m.x1_scale);
    const double X2 = standardized(x2, m.x2_center, m.x2_scale);
    if (m.form == SurrogateForm::G2GBudget) return c[0] * std::exp(c[1] * X1) + c[2];
    double phi[10];
    basis(m.form, X1, X2, phi);
    double y = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) y += c[k] * phi[k];
    return y;
}

double r_squared(const std::vector<double>& y, const std::vector<double>& fitted) {
    if (y.empty()) return 0.0;
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_tot += (y[i] - mean) * (y[i] - mean);
        ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
    }
    if (ss_tot == 0.0) return 0.0;
    return 1.0 - ss_res / ss_tot;
}

namespace {

/// Least squares with column equilibration; throws FitError when rank deficient.
Eigen::VectorXd solve_least_squares(Eigen::MatrixXd A, const Eigen::VectorXd& b) {
    Eigen::VectorXd scale(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double m = A.col(j).cwiseAbs().maxCoeff();
        scale(j) = m > 0.0 ? m : 1.0;
        A.col(j) /= scale(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < A.cols()) throw FitError("fit_surrogate: singular design matrix");
    Eigen::VectorXd x = qr.solve(b);
    return x.cwiseQuotient(scale);
}

double sse_exponential(const std::vector<Sample>& s, double a, double b, double c) {
    double sse = 0.0;
    for (const auto& p : s) {
        const double r = a * std::exp(b * p.x1) + c - p.y;
        sse += r * r;
    }
    return sse;
}

/// a*exp(b*x) + c by Levenberg-Marquardt from one starting b.
std::array<double, 3> fit_exponential_from(const std::vector<Sample>& s, double b0) {
    const auto n = static_cast<Eigen::Index>(s.size());
    // Linear (a, c) for the starting b.
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = std::exp(b0 * s[static_cast<std::size_t>(i)].x1);
        A(i, 1) = 1.0;
        y(i) = s[static_cast<std::size_t>(i)].y;
    }
    const Eigen::VectorXd ac = solve_least_squares(A, y);
    std::array<double, 3> p{ac(0), b0, ac(1)};
    double sse = sse_exponential(s, p[0], p[1], p[2]);
    double lambda = 1e-3;
    for (int iter = 0; iter < 500; ++iter) {
        Eigen::MatrixXd J(n, 3);
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& q = s[static_cast<std::size_t>(i)];
            const double e = std::exp(p[1] * q.x1);
            J(i, 0) = e;
            J(i, 1) = p[0] * q.x1 * e;
            J(i, 2) = 1.0;
            r(i) = p[0] * e + p[2] - q.y;
        }
        const Eigen::Matrix3d JtJ = J.transpose() * J;
        const Eigen::Vector3d g = J.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            Eigen::Matrix3d M = JtJ;
            for (int k = 0; k < 3; ++k) M(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
            const Eigen::Vector3d step = M.ldlt().solve(-g);
            const std::array<double, 3> cand{p[0] + step(0), p[1] + step(1), p[2] + step(2)};
            const double cand_sse = sse_exponential(s, cand[0], cand[1], cand[2]);
            if (std::isfinite(cand_sse) && cand_sse < sse) {
                const double gain = (sse - cand_sse) / std::max(sse, 1e-300);
                p = cand;
                sse = cand_sse;
                lambda = std::max(lambda * 0.3, 1e-12);
                improved = true;
                if (gain < 1e-15) return p;
            } else {
                lambda *= 10.0;
            }
        }
        if (!improved) break;
    }
    return p;
}

std::vector<double> predict(const FittedSurrogate& m, const std::vector<Sample>& s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& p : s) out.push_back(eval_surrogate(m, p.x1, p.x2));
    return out;
}

std::vector<double> targets(const std::vector<Sample>& s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& p : s) out.push_back(p.y);
    return out;
}

void mean_sd(const std::vector<Sample>& s, double Sample::*field, double& center, double& scale) {
    double m = 0.0;
    for (const auto& p : s) m += p.*field;
    m /= static_cast<double>(s.size());
    double v = 0.0;
    for (const auto& p : s) v += (p.*field - m) * (p.*field - m);
    v /= static_cast<double>(s.size());
    center = m;
    scale = v > 0.0 ? std::sqrt(v) : 1.0;
}

}  // namespace

FittedSurrogate fit_surrogate(const std::vector<Sample>& samples, SurrogateForm form, const FitOptions& options) {
    const std::size_t k = coefficient_count(form);
    if (samples.size() < 2 * k)
        throw FitError(std::string("fit_surrogate: ") + form_name(form) + " needs at least " +
                       std::to_string(2 * k) + " samples, got " + std::to_string(samples.size()));
    if (!(options.train_fraction > 0.0 && options.train_fraction <= 1.0))
        throw FitError("fit_surrogate: train_fraction must lie in (0, 1]");
    for (const auto& p : samples)
        if (!std::isfinite(p.x1) || !std::isfinite(p.x2) || !std::isfinite(p.y))
            throw FitError("fit_surrogate: non-finite sample");

    std::vector<Sample> shuffled = samples;
    Rng rng = make_stream(options.seed, 0x5u);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::size_t n_train = static_cast<std::size_t>(std::llround(options.train_fraction * static_cast<double>(samples.size())));
    n_train = std::clamp(n_train, k, samples.size());
    const std::vector<Sample> train(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::vector<Sample> test(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());

    FittedSurrogate m;
    m.form = form;
    if (is_polynomial(form) && options.standardize) {
        mean_sd(train, &Sample::x1, m.x1_center, m.x1_scale);
        mean_sd(train, &Sample::x2, m.x2_center, m.x2_scale);
    }

    if (form == SurrogateForm::G2GBudget) {
        double x_lo = train.front().x1;
        double x_hi = x_lo;
        for (const auto& p : train) {
            x_lo = std::min(x_lo, p.x1);
            x_hi = std::max(x_hi, p.x1);
        }
        if (!(x_hi > x_lo)) throw FitError("fit_surrogate: G2GBudget needs more than one distinct X1");
        std::array<double, 3> best{};
        double best_sse = std::numeric_limits<double>::infinity();
        for (double b0 : {0.001, 0.005, 0.01}) {
            std::array<double, 3> p;
            try {
                p = fit_exponential_from(train, b0);
            } catch (const FitError&) {
                continue;  // exp(b0 * x) overflowed or collapsed for this start
            }
            const double sse = sse_exponential(train, p[0], p[1], p[2]);
            if (std::isfinite(sse) && sse < best_sse) {
                best_sse = sse;
                best = p;
            }
        }
        if (!std::isfinite(best_sse)) throw FitError("fit_surrogate: exponential fit failed from every start");
        m.coefficients.assign(best.begin(), best.end());
    } else {
        const auto n = static_cast<Eigen::Index>(train.size());
        Eigen::MatrixXd A(n, static_cast<Eigen::Index>(k));
        Eigen::VectorXd y(n);
        double phi[10];
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& p = train[static_cast<std::size_t>(i)];
            basis(form, standardized(p.x1, m.x1_center, m.x1_scale), standardized(p.x2, m.x2_center, m.x2_scale),
                  phi);
            for (std::size_t j = 0; j < k; ++j) A(i, static_cast<Eigen::Index>(j)) = phi[j];
            y(i) = p.y;
        }
        const Eigen::VectorXd beta = solve_least_squares(A, y);
        m.coefficients.assign(beta.data(), beta.data() + beta.size());
    }

    m.train_r2 = r_squared(targets(train), predict(m, train));
    m.test_r2 = test.empty() ? m.train_r2 : r_squared(targets(test), predict(m, test));
    return m;
}

// ---------------------------------------------------------------------------
// Curves

std::vector<CurvePoint> budget_line(double total_budget, const FittedSurrogate& g2g_model,
                                   const FittedSurrogate& f2e_model, const std::vector<double>& x2_grid,
                                   double x1_max) {
    if (!(total_budget > 0.0)) throw DomainError("budget_line: total budget must be > 0");
    if (!(x1_max > 0.0)) throw DomainError("budget_line: x1_max must be > 0");
    std::vector<CurvePoint> out;
    constexpr int kScan = 256;
    for (double x2 : x2_grid) {
        auto f = [&](double x1) {
            return eval_surrogate(g2g_model, x1, x2) + eval_surrogate(f2e_model, x1, x2) - total_budget;
        };
        // First sign change on a fine scan, then bisection.
        double lo = 0.0;
        double f_lo = f(lo);
        bool found = f_lo == 0.0;
        double hi = lo;
        for (int i = 1; i <= kScan && !found; ++i) {
            hi = x1_max * i / kScan;
            const double f_hi = f(hi);
            if ((f_lo < 0.0) != (f_hi < 0.0) || f_hi == 0.0) {
                found = true;
                break;
            }
            lo = hi;
            f_lo = f_hi;
        }
        if (!found) continue;
        double x = lo;
        if (f_lo != 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const double fm = f(mid);
                if ((fm < 0.0) == (f_lo < 0.0)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            x = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
        }
        if (std::abs(f(x)) <= 1e-6 * total_budget) out.push_back({x, x2, 0});
    }
    return out;
}

namespace {

/// Real roots of sum c[i] t^i (degree <= 3), each polished by Newton steps.
std::vector<double> real_roots(std::array<double, 4> c) {
    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0) return {};
    int degree = 3;
    while (degree > 0 && std::abs(c[static_cast<std::size_t>(degree)]) <= 1e-14 * cmax) --degree;
    if (degree == 0) return {};

    std::vector<double> roots;
    if (degree == 1) {
        roots.push_back(-c[0] / c[1]);
    } else {
        // Companion matrix of the monic polynomial.
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(degree, degree);
        const double lead = c[static_cast<std::size_t>(degree)];
        for (int i = 1; i < degree; ++i) C(i, i - 1) = 1.0;
        for (int i = 0; i < degree; ++i) C(i, degree - 1) = -c[static_cast<std::size_t>(i)] / lead;
        Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
        for (int i = 0; i < degree; ++i) {
            const auto z = es.eigenvalues()(i);
            if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
        }
    }
    auto p = [&](double t) { return ((c[3] * t + c[2]) * t + c[1]) * t + c[0]; };
    auto dp = [&](double t) { return (3.0 * c[3] * t + 2.0 * c[2]) * t + c[1]; };
    for (double& r : roots) {
        for (int it = 0; it < 50; ++it) {
            const double d = dp(r);
            if (d == 0.0) break;
            const double next = r - p(r) / d;
            if (!std::isfinite(next) || std::abs(p(next)) >= std::abs(p(r))) break;
            r = next;
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }),
                roots.end());
    return roots;
}

}  // namespace

std::vector<CurvePoint> indifference_curve(const FittedSurrogate& m, double level, const std::vector<double>& x2_grid,
                                           double x1_min, double x1_max) {
    if (!is_polynomial(m.form)) throw DomainError("indifference_curve: model must be a polynomial form");
    if (m.coefficients.size() != coefficient_count(m.form)) throw DomainError("indifference_curve: bad coefficients");
    if (x1_max < x1_min) throw DomainError("indifference_curve: empty x1 domain");
    const auto& b = m.coefficients;
    const double tol = 1e-6 * std::max(1.0, std::abs(level));
    std::vector<CurvePoint> out;
    for (double x2 : x2_grid) {
        const double X2 = standardized(x2, m.x2_center, m.x2_scale);
        // Collect the polynomial in X1 for this X2.
        std::array<double, 4> c{};
        c[0] = b[0] + b[2] * X2 + b[5] * X2 * X2 - level;
        c[1] = b[1] + b[4] * X2;
        c[2] = b[3];
        if (m.form == SurrogateForm::HabitatCubic) {
            c[0] += b[9] * X2 * X2 * X2;
            c[1] += b[8] * X2 * X2;
            c[2] += b[7] * X2;
            c[3] = b[6];
        }
        int branch = 0;
        for (double X1 : real_roots(c)) {
            const double x1 = m.x1_center + X1 * m.x1_scale;
            if (x1 < x1_min || x1 > x1_max) continue;
            if (std::abs(eval_surrogate(m, x1, x2) - level) > tol) continue;
            out.push_back({x1, x2, branch++});
        }
    }
    return out;
}

namespace {

const ScenarioResult* find_result(const SweepResult& sweep, double g2g, double price) {
    return sweep.find(PolicyScenario(g2g, price));
}

}  // namespace

std::vector<EfficiencyPoint> g2g_efficiency(const SweepResult& sweep, double f2e_price) {
    std::vector<const ScenarioResult*> column;
    const PolicyScenario probe(0.0, f2e_price);
    for (const auto& r : sweep.results)
        if (r.scenario.f2e_price == probe.f2e_price) column.push_back(&r);
    std::sort(column.begin(), column.end(), [](auto* a, auto* b) { return a->scenario < b->scenario; });
    std::vector<EfficiencyPoint> out;
    for (const auto* r : column) {
        const auto& y = r->reference_year();
        EfficiencyPoint e{r->scenario.g2g_compensation, y.reverted_area_mu, y.g2g_expenditure, 0.0};
        e.ratio = e.cost > 0.0 ? e.benefit / e.cost : 0.0;
        out.push_back(e);
    }
    return out;
}

std::vector<EfficiencyPoint> f2e_efficiency(const SweepResult& sweep, double g2g_compensation) {
    const ScenarioResult* base = find_result(sweep, g2g_compensation, kStandardElectricityPrice);
    std::vector<const ScenarioResult*> row;
    const PolicyScenario probe(g2g_compensation, kStandardElectricityPrice);
    for (const auto& r : sweep.results)
        if (r.scenario.g2g_compensation == probe.g2g_compensation) row.push_back(&r);
    std::sort(row.begin(), row.end(),
              [](auto* a, auto* b) { return a->scenario.f2e_price < b->scenario.f2e_price; });
    const double base_firewood = base ? base->reference_year().firewood_kg : 0.0;
    std::vector<EfficiencyPoint> out;
    for (const auto* r : row) {
        const auto& y = r->reference_year();
        EfficiencyPoint e{r->scenario.f2e_price, base ? base_firewood - y.firewood_kg : 0.0, y.f2e_subsidy, 0.0};
        e.ratio = e.cost > 0.0 ? e.benefit / e.cost : 0.0;
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Posterior selection

void PosteriorQuery::validate() const {
    if (!(budget_cap > 0.0)) throw DomainError("posterior query: budget cap must be > 0");
    if (!(min_reverted_area_mu >= 0.0) || !std::isfinite(min_reverted_area_mu))
        throw DomainError("posterior query: minimum area must be a finite value >= 0");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("posterior query: weights must be >= 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("posterior query: weights must sum to 1");
}

std::vector<RankedPoint> posterior_select(const std::vector<ParetoPoint>& frontier, const PosteriorQuery& query) {
    if (frontier.empty()) throw DomainError("posterior_select: empty frontier");
    query.validate();
    std::vector<RankedPoint> survivors;
    for (const auto& p : frontier)
        if (p.direct.financial_burden <= query.budget_cap && p.direct.reverted_area_mu >= query.min_reverted_area_mu)
            survivors.push_back({p, 0.0, {}, {}});
    if (survivors.empty()) return survivors;

    for (Objective o : kObjectives) {
        const auto k = static_cast<std::size_t>(o);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& r : survivors) {
            lo = std::min(lo, r.point.objectives.goodness(o));
            hi = std::max(hi, r.point.objectives.goodness(o));
        }
        for (auto& r : survivors) {
            r.normalized[k] = hi > lo ? (r.point.objectives.goodness(o) - lo) / (hi - lo) : 1.0;
            r.weighted[k] = query.weights[k] * r.normalized[k];
        }
    }
    for (auto& r : survivors) r.score = r.weighted[0] + r.weighted[1] + r.weighted[2];

    std::stable_sort(survivors.begin(), survivors.end(), [](const RankedPoint& a, const RankedPoint& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.point.direct.financial_burden != b.point.direct.financial_burden)
            return a.point.direct.financial_burden < b.point.direct.financial_burden;
        if (a.point.scenario.g2g_compensation != b.point.scenario.g2g_compensation)
            return a.point.scenario.g2g_compensation < b.point.scenario.g2g_compensation;
        return a.point.scenario.f2e_price < b.point.scenario.f2e_price;
    });
    return survivors;
}

}  // namespace pandasim
