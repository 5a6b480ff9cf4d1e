#include "pandasim/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "pandasim/config.hpp"
#include "pandasim/error.hpp"
#include "pandasim/fixtures.hpp"
#include "pandasim/report.hpp"
#include "pandasim/serve.hpp"
#include "pandasim/sweep_io.hpp"

namespace pandasim {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::array<double, 3> parse_weights(const std::string& text) {
    std::array<double, 3> w{};
    std::stringstream ss(text);
    std::string part;
    std::size_t k = 0;
    while (std::getline(ss, part, ',')) {
        if (k >= 3) throw ConfigError("--weights takes three comma-separated values (carbon,habitat,econ)");
        try {
            w[k++] = std::stod(part);
        } catch (const std::exception&) {
            throw ConfigError("--weights: cannot parse '" + part + "'");
        }
    }
    if (k != 3) throw ConfigError("--weights takes three comma-separated values (carbon,habitat,econ)");
    return w;
}

/// Smallest lattice that reproduces a set of axis values.
Lattice infer_lattice(std::set<double> values) {
    Lattice l;
    l.min = *values.begin();
    l.max = *values.rbegin();
    l.step = 1.0;
    double step = 0.0;
    double prev = l.min;
    for (double v : values) {
        if (v > prev && (step == 0.0 || v - prev < step)) step = v - prev;
        prev = v;
    }
    if (step > 0.0) l.step = std::round(step * 1e6) / 1e6;
    return l;
}

ScenarioLattices lattices_of(const SweepResult& sweep) {
    std::set<double> g, f;
    for (const auto& r : sweep.results) {
        g.insert(r.scenario.g2g_compensation);
        f.insert(r.scenario.f2e_price);
    }
    return {infer_lattice(g), infer_lattice(f)};
}

RunConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return load_run_config(path);
}

int cmd_sweep(const std::string& config_path, const std::optional<std::uint64_t>& seed, const std::string& scenarios,
              const std::optional<int>& replicates, const std::optional<int>& threads, const std::string& out_dir,
              std::ostream& out) {
    RunConfig config = load_config_or_default(config_path);
    if (seed) config.base_seed = *seed;
    if (replicates) {
        if (*replicates < 1) throw ConfigError("--replicates must be >= 1");
        config.n_replicates = *replicates;
    }
    if (!scenarios.empty()) config.scenarios = parse_scenario_spec(scenarios, config.scenarios);
    if (!out_dir.empty()) config.output_dir = out_dir;
    config.validate();

    const auto grid = scenario_grid(config.scenarios);
    SweepOptions options;
    options.threads = threads.value_or(0);
    options.config_hash = config_hash(config);
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult sweep = run_sweep(config.sim, grid, config.n_replicates, config.base_seed, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto meta = metadata_json(sweep.metadata);
    meta["n_scenarios"] = grid.size();
    meta["config"] = to_json(config);
    write_file_atomic(join_path(config.output_dir, "sweep.csv"), sweep_csv(sweep));
    write_file_atomic(join_path(config.output_dir, "sweep.meta.json"), meta.dump(2) + "\n");
    out << "sweep: " << grid.size() << " scenarios x " << config.n_replicates << " replicates in " << secs
        << " s -> " << join_path(config.output_dir, "sweep.csv") << "\n";
    return kExitOk;
}

AnalysisConfig analysis_config(const std::string& config_path, const std::string& fit_habitat) {
    AnalysisConfig a = load_config_or_default(config_path).analysis;
    if (!fit_habitat.empty()) {
        if (fit_habitat != "cubic" && fit_habitat != "quadratic")
            throw ConfigError("--fit-habitat must be 'cubic' or 'quadratic'");
        a.habitat_form = fit_habitat;
    }
    return a;
}

int cmd_analyze(const std::string& sweep_path, const std::string& out_dir, const std::string& config_path,
                const std::string& fit_habitat, const std::optional<double>& budget,
                const std::optional<double>& min_area, const std::string& weights, std::ostream& out) {
    const SweepResult sweep = load_sweep_csv(sweep_path);
    const AnalysisConfig ac = analysis_config(config_path, fit_habitat);
    const AnalysisResult a = analyze_points(reference_points(sweep), ac);

    PosteriorQuery query;
    const bool have_query = budget || min_area || !weights.empty();
    if (budget) query.budget_cap = *budget;
    if (min_area) query.min_reverted_area_mu = *min_area;
    if (!weights.empty()) query.weights = parse_weights(weights);
    if (have_query) {
        try {
            query.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }

    const std::string dir = out_dir.empty() ? fs::path(sweep_path).parent_path().string() : out_dir;
    write_file_atomic(join_path(dir, "frontier.json"), frontier_json(a).dump(2) + "\n");
    write_file_atomic(join_path(dir, "labels.csv"), labels_csv(a));
    write_file_atomic(join_path(dir, "surrogates.json"), surrogates_json(a).dump(2) + "\n");
    write_file_atomic(join_path(dir, "curves.json"), curves_json(a, &sweep, query).dump(2) + "\n");

    out << "frontier: " << a.frontier.size() << " of " << a.points.size() << " scenarios\n";
    for (const auto& s : a.surrogates) {
        if (s.model)
            out << "surrogate " << s.role << " (" << form_name(s.form) << "): train R2 " << s.model->train_r2
                << ", test R2 " << s.model->test_r2 << "\n";
        else
            out << "surrogate " << s.role << " (" << form_name(s.form) << "): " << s.error << "\n";
    }
    if (have_query) {
        const auto ranked = posterior_select(a.frontier, query);
        write_file_atomic(join_path(dir, "ranking.json"), ranking_json(ranked).dump(2) + "\n");
        out << ranking_table(ranked);
    }
    return kExitOk;
}

int cmd_export(const std::string& sweep_path, const std::string& out_path, const std::string& config_path,
               bool fixture, std::ostream& out) {
    BundleInfo info;
    AnalysisResult a;
    if (fixture) {
        a = analyze_points(reference_frontier_fixture(), AnalysisConfig{});
        info.config_hash = "reference-frontier-fixture";
        info.reference_year = 2024;
        info.lattices = ScenarioLattices{};
    } else {
        if (sweep_path.empty()) throw ConfigError("export needs a sweep CSV (or --fixture)");
        const SweepResult sweep = load_sweep_csv(sweep_path);
        a = analyze_points(reference_points(sweep), analysis_config(config_path, ""));
        info.config_hash = sweep.metadata.config_hash;
        info.reference_year = sweep.results.front().reference_year().year;
        info.lattices = lattices_of(sweep);
    }
    const std::string text = explorer_bundle(a, info).dump() + "\n";
    write_file_atomic(out_path, text);
    out << "bundle: " << a.points.size() << " points, " << a.frontier.size() << " on the frontier -> " << out_path
        << " (" << text.size() << " bytes)\n";
    return kExitOk;
}

int cmd_serve(const std::string& dir, const std::string& bundle, const std::string& host, int port, std::ostream& out) {
    StaticServer server(dir, bundle);
    const int bound = server.bind(host, port);
    out << "serving " << (dir.empty() ? "(no static root)" : dir) << " on http://" << host << ":" << bound << "/\n"
        << std::flush;
    server.listen();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grain-to-Green / Firewood-to-Electricity policy simulator"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run the scenario sweep and write sweep.csv + sweep.meta.json");
    std::string config_path;
    std::uint64_t seed = 0;
    std::string scenarios;
    int replicates = 0;
    int threads = 0;
    std::string out_dir;
    auto* seed_opt = sweep->add_option("--seed", seed, "base seed");
    sweep->add_option("--config", config_path, "JSON run configuration");
    sweep->add_option("--scenarios", scenarios, "lattice restriction, e.g. g2g=0..2000:100,f2e=0.65");
    auto* rep_opt = sweep->add_option("--replicates", replicates, "replicates per scenario");
    auto* thr_opt = sweep->add_option("--threads", threads, "worker threads (default: PANDA_SIM_THREADS or all cores)");
    sweep->add_option("--out", out_dir, "output directory");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "frontier, labels, surrogates, curves and posterior ranking");
    std::string sweep_path;
    std::string fit_habitat;
    double budget = 0.0;
    double min_area = 0.0;
    std::string weights;
    analyze->add_option("sweep", sweep_path, "sweep CSV")->required();
    analyze->add_option("--out", out_dir, "output directory (default: next to the CSV)");
    analyze->add_option("--config", config_path, "JSON run configuration (analysis section is used)");
    analyze->add_option("--fit-habitat", fit_habitat, "cubic or quadratic");
    auto* budget_opt = analyze->add_option("--budget", budget, "budget cap, CNY");
    auto* area_opt = analyze->add_option("--min-area", min_area, "minimum reverted area, Mu");
    analyze->add_option("--weights", weights, "carbon,habitat,econ preference weights");

    // export
    auto* exp = app.add_subcommand("export", "write the explorer bundle");
    std::string export_sweep;
    std::string export_out;
    bool fixture = false;
    exp->add_option("sweep", export_sweep, "sweep CSV");
    exp->add_option("--out", export_out, "bundle path")->required();
    exp->add_option("--config", config_path, "JSON run configuration (analysis section is used)");
    exp->add_flag("--fixture", fixture, "export the 18-point reference frontier instead of a sweep");

    // serve
    auto* serve = app.add_subcommand("serve", "serve the explorer files and a bundle over HTTP");
    std::string serve_dir;
    std::string serve_bundle;
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--dir", serve_dir, "static file root");
    serve->add_option("--bundle", serve_bundle, "bundle served at /bundle.json");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port (0 = any free port)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitBadInput;
    }

    if (std::getenv("PANDASIM_CRASH_BEFORE_RENAME"))
        g_before_rename_hook = [](const std::string&) { std::_Exit(70); };

    try {
        if (*sweep) {
            std::optional<std::uint64_t> s;
            if (*seed_opt) s = seed;
            std::optional<int> r, t;
            if (*rep_opt) r = replicates;
            if (*thr_opt) t = threads;
            return cmd_sweep(config_path, s, scenarios, r, t, out_dir, out);
        }
        if (*analyze) {
            std::optional<double> b, m;
            if (*budget_opt) b = budget;
            if (*area_opt) m = min_area;
            return cmd_analyze(sweep_path, out_dir, config_path, fit_habitat, b, m, weights, out);
        }
        if (*exp) return cmd_export(export_sweep, export_out, config_path, fixture, out);
        if (*serve) return cmd_serve(serve_dir, serve_bundle, host, port, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace pandasim
