// Command-line front end: fit / compare / predict / simulate / diagnose.
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stsir/config.hpp"
#include "stsir/forecast.hpp"
#include "stsir/ingest.hpp"
#include "stsir/mcmc.hpp"
#include "stsir/metrics.hpp"
#include "stsir/report.hpp"

namespace fs = std::filesystem;
using namespace stsir;

namespace {

struct GlobalFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> mode;
    int chains = 1;
};

void add_global_flags(CLI::App* sub, GlobalFlags& g) {
    sub->add_option("--seed", [&g](const CLI::results_t& r) {
        g.seed = std::stoull(r[0]);
        return true;
    }, "Override the sampler seed");
    sub->add_option("--out", [&g](const CLI::results_t& r) {
        g.out = r[0];
        return true;
    }, "Override the output directory");
    sub->add_option("--mode", [&g](const CLI::results_t& r) {
        g.mode = r[0];
        return true;
    }, "Data mode: raw (Poisson) or smoothed (log-normal)")
        ->check(CLI::IsMember({"raw", "smoothed"}));
    sub->add_option("--chains", g.chains, "Number of independent chains (seeds seed..seed+k-1)")
        ->check(CLI::PositiveNumber);
}

RunConfig resolve_config(const std::string& path, const GlobalFlags& g) {
    RunConfig cfg = load_run_config(path);
    if (g.seed) cfg.sampler.seed = *g.seed;
    if (g.out) cfg.output_dir = *g.out;
    if (g.mode) {
        cfg.mode = *g.mode;
        cfg.apply_mode();
    }
    return cfg;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
}

PanelData load_panel_for(const RunConfig& cfg) {
    // the covariate loads whenever a path is given, so variants with and
    // without b2 see (and hash) the same panel
    PanelData panel = load_panel(cfg.cases_path, cfg.population_path, cfg.covariate_path,
                                 cfg.start, cfg.end);
    if (cfg.model.needs_covariate() && panel.poverty.empty())
        throw ConfigError("model variant " + variant_name(cfg.model.variant) +
                          " requires a covariate file");
    if (cfg.mode == "smoothed") panel.smoothed = smooth_3day_centered(panel.sym);
    return panel;
}

std::optional<AdjacencyGraph> load_graph_for(const RunConfig& cfg, const PanelData& panel) {
    if (!cfg.model.needs_graph()) return std::nullopt;
    if (cfg.adjacency_path.empty())
        throw ConfigError("model variant " + variant_name(cfg.model.variant) +
                          " requires an adjacency file");
    return load_adjacency(cfg.adjacency_path, panel.region_ids);
}

GewekeResult safe_geweke(std::span<const double> column) {
    if (column.size() < 100) return {0.0, true};
    return geweke_z(column);
}

std::map<std::string, std::string> trace_meta(const RunConfig& cfg, const PanelData& panel,
                                              std::uint64_t seed) {
    return {{"spec_hash", spec_hash(cfg.model)},
            {"panel_hash", panel_hash(panel)},
            {"seed", std::to_string(seed)},
            {"model", variant_name(cfg.model.variant)},
            {"mode", cfg.mode}};
}

/// Runs the chains and writes every fit artifact into cfg.output_dir.
void run_fit(const RunConfig& cfg, int chains) {
    PanelData panel = load_panel_for(cfg);
    auto graph = load_graph_for(cfg, panel);
    const AdjacencyGraph* gptr = graph ? &*graph : nullptr;
    ensure_dir(cfg.output_dir);
    const fs::path out(cfg.output_dir);

    std::vector<ChainTrace> traces;
    for (int c = 0; c < chains; ++c) {
        SamplerConfig sampler = cfg.sampler;
        sampler.seed = cfg.sampler.seed + static_cast<std::uint64_t>(c);
        traces.push_back(run_chain(panel, cfg.model, gptr, sampler));
        if (chains > 1)
            write_trace_csv((out / ("trace_chain" + std::to_string(c + 1) + ".csv")).string(),
                            traces.back(), cfg.model, trace_meta(cfg, panel, sampler.seed));
    }

    ChainTrace merged = std::move(traces.front());
    for (std::size_t c = 1; c < traces.size(); ++c) {
        auto& t = traces[c];
        merged.draws.insert(merged.draws.end(), t.draws.begin(), t.draws.end());
        merged.deviances.insert(merged.deviances.end(), t.deviances.begin(), t.deviances.end());
        merged.mu_snapshots.insert(merged.mu_snapshots.end(),
                                   std::make_move_iterator(t.mu_snapshots.begin()),
                                   std::make_move_iterator(t.mu_snapshots.end()));
    }
    write_trace_csv((out / "trace.csv").string(), merged, cfg.model,
                    trace_meta(cfg, panel, cfg.sampler.seed));

    write_summary_csv((out / "summary.csv").string(), summarize_trace(merged, cfg.model));
    write_dic_csv((out / "dic.csv").string(), variant_name(cfg.model.variant),
                  dic(merged.deviances));

    // single-chain Geweke per parameter column plus the deviance
    std::vector<GewekeRow> grows;
    for (int c = 0; c < chains; ++c) {
        const ChainTrace& t = (chains == 1) ? merged : traces[c];
        const auto& source = (chains == 1) ? merged : traces[c];
        std::vector<double> col(source.draws.size());
        for (std::size_t k = 0; k < t.param_names.size(); ++k) {
            for (std::size_t s = 0; s < source.draws.size(); ++s)
                col[s] = flatten_params(source.draws[s], cfg.model)[k];
            grows.push_back({c + 1, t.param_names[k], safe_geweke(col)});
        }
        grows.push_back({c + 1, "deviance", safe_geweke(source.deviances)});
    }
    write_geweke_csv((out / "geweke.csv").string(), grows);

    const MatrixD observed = modeled_counts(panel, cfg.model);
    if (!merged.mu_snapshots.empty()) {
        for (int i = 0; i < panel.m(); ++i)
            write_fitted_profile_csv(
                (out / ("fitted_mean_" + panel.region_ids[i] + ".csv")).string(), panel, i,
                merged.mu_snapshots, observed);
        write_surface_csv((out / "mse.csv").string(), panel,
                          mse_profile(merged.mu_snapshots, observed), "mse");
        const auto reps = replicate_within_sample(merged, cfg.model,
                                                  cfg.sampler.seed ^ 0x9e3779b97f4a7c15ull);
        write_surface_csv((out / "mspe.csv").string(), panel, mspe_profile(reps, observed), "mspe");
    }
}

/// Rebuilds a ChainTrace from a trace file, verifying it matches the config.
ChainTrace trace_from_file(const std::string& path, const RunConfig& cfg, const PanelData& panel) {
    TraceFile tf = read_trace_csv(path);
    const auto it = tf.meta.find("spec_hash");
    if (it == tf.meta.end() || it->second != spec_hash(cfg.model))
        throw DataError(path + ": trace was produced by a different model spec");
    const auto ph = tf.meta.find("panel_hash");
    if (ph == tf.meta.end() || ph->second != panel_hash(panel))
        throw DataError(path + ": trace was produced from a different panel");
    ChainTrace trace;
    trace.param_names = param_names(cfg.model, panel.m(), panel.T());
    if (tf.param_names != trace.param_names)
        throw DataError(path + ": trace columns do not match the model parameter layout");
    for (const auto& row : tf.rows)
        trace.draws.push_back(unflatten_params(row, cfg.model, panel.m(), panel.T()));
    trace.deviances = tf.deviances;
    return trace;
}

int cmd_fit(const std::string& config_path, const GlobalFlags& g) {
    RunConfig cfg = resolve_config(config_path, g);
    run_fit(cfg, g.chains);
    std::cout << "fit: wrote " << cfg.output_dir << "\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& config_paths, const GlobalFlags& g) {
    if (config_paths.size() < 2) throw ConfigError("compare needs at least 2 --config files");
    if (!g.out) throw ConfigError("compare needs --out for the comparison table");
    ensure_dir(*g.out);
    std::vector<CompareRow> rows;
    std::string ref_hash;
    for (const auto& path : config_paths) {
        GlobalFlags per = g;
        per.out.reset(); // each fit keeps its own output_dir
        RunConfig cfg = resolve_config(path, per);
        const fs::path trace_path = fs::path(cfg.output_dir) / "trace.csv";
        if (!fs::exists(trace_path)) run_fit(cfg, g.chains);
        TraceFile tf = read_trace_csv(trace_path.string());
        const auto ph = tf.meta.find("panel_hash");
        if (ph == tf.meta.end()) throw DataError(trace_path.string() + ": missing panel hash");
        if (ref_hash.empty())
            ref_hash = ph->second;
        else if (ph->second != ref_hash)
            throw DataError("compare: configs were fitted on different panels");
        rows.push_back({fs::path(path).stem().string(), dic(tf.deviances)});
    }
    write_compare_csv((fs::path(*g.out) / "compare.csv").string(), rows);
    std::cout << "compare: wrote " << (fs::path(*g.out) / "compare.csv").string() << "\n";
    return 0;
}

int cmd_predict(const std::string& config_path, const std::string& trace_path,
                const GlobalFlags& g) {
    RunConfig cfg = resolve_config(config_path, g);
    PanelData panel = load_panel_for(cfg);
    auto graph = load_graph_for(cfg, panel);
    ChainTrace trace = trace_from_file(trace_path, cfg, panel);
    const std::uint64_t seed = (g.seed ? *g.seed : cfg.sampler.seed) ^ 0xf0bec457u;
    auto fc = one_step_forecast(trace, panel, cfg.model, graph ? &*graph : nullptr, seed);
    ensure_dir(cfg.output_dir);
    write_forecast_csv((fs::path(cfg.output_dir) / "forecast.csv").string(), fc);
    std::cout << "predict: wrote " << (fs::path(cfg.output_dir) / "forecast.csv").string() << "\n";
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const GlobalFlags& g) {
    json sj = load_json_file(scenario_path);
    if (g.seed) sj["seed"] = *g.seed;
    SimScenario sc = scenario_from_json(sj);
    const std::string out_dir = g.out ? *g.out : "sim_out";
    ensure_dir(out_dir);
    const fs::path out(out_dir);
    PanelData panel = simulate_panel(sc);
    write_panel_files(panel, (out / "cases.csv").string(), (out / "population.csv").string(),
                      panel.poverty.empty() ? "" : (out / "covariate.csv").string());
    if (sc.graph.m() == sc.m)
        write_adjacency_file(sc.graph, panel.region_ids, (out / "adjacency.csv").string());
    json truth{{"seed", sc.seed},
               {"model", model_spec_to_json(sc.spec)},
               {"true_params", params_to_json(sc.true_params, sc.spec)},
               {"start_date", panel.dates.front().to_string()},
               {"end_date", panel.dates.back().to_string()}};
    csv::atomic_write((out / "truth.json").string(), truth.dump(2) + "\n");
    std::cout << "simulate: wrote " << out_dir << "\n";
    return 0;
}

int cmd_diagnose(const std::string& trace_path, const GlobalFlags& g) {
    if (!g.out) throw ConfigError("diagnose needs --out for its reports");
    TraceFile tf = read_trace_csv(trace_path);
    if (tf.rows.empty()) throw DataError(trace_path + ": empty trace");
    ensure_dir(*g.out);
    std::vector<GewekeRow> grows;
    std::vector<double> col(tf.rows.size());
    for (std::size_t k = 0; k < tf.param_names.size(); ++k) {
        for (std::size_t s = 0; s < tf.rows.size(); ++s) col[s] = tf.rows[s][k];
        grows.push_back({1, tf.param_names[k], safe_geweke(col)});
    }
    grows.push_back({1, "deviance", safe_geweke(tf.deviances)});
    write_geweke_csv((fs::path(*g.out) / "geweke.csv").string(), grows);
    const auto model_it = tf.meta.find("model");
    write_dic_csv((fs::path(*g.out) / "dic.csv").string(),
                  model_it == tf.meta.end() ? "trace" : model_it->second, dic(tf.deviances));
    std::cout << "diagnose: wrote " << *g.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian space-time SIR modeling of county-level epidemic counts"};
    app.require_subcommand(1);

    GlobalFlags g;
    std::string config_path, trace_path, scenario_path;
    std::vector<std::string> config_paths;

    auto* fit = app.add_subcommand("fit", "Fit a model variant by MCMC and write posterior reports");
    fit->add_option("--config", config_path, "Run configuration JSON")->required();
    add_global_flags(fit, g);

    auto* compare = app.add_subcommand("compare", "Compare fitted models by DIC");
    compare->add_option("--config", config_paths, "Run configuration JSONs (repeatable)")
        ->required()
        ->expected(-1);
    add_global_flags(compare, g);

    auto* predict = app.add_subcommand("predict", "One-step-ahead forecast from a stored trace");
    predict->add_option("--config", config_path, "Run configuration JSON")->required();
    predict->add_option("--trace", trace_path, "Trace CSV written by fit")->required();
    add_global_flags(predict, g);

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic panel from a scenario");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
    add_global_flags(simulate, g);

    auto* diagnose = app.add_subcommand("diagnose", "Geweke and DIC reports for a stored trace");
    diagnose->add_option("--trace", trace_path, "Trace CSV written by fit")->required();
    add_global_flags(diagnose, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        if (fit->parsed()) return cmd_fit(config_path, g);
        if (compare->parsed()) return cmd_compare(config_paths, g);
        if (predict->parsed()) return cmd_predict(config_path, trace_path, g);
        if (simulate->parsed()) return cmd_simulate(scenario_path, g);
        if (diagnose->parsed()) return cmd_diagnose(trace_path, g);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
