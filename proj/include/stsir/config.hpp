#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "stsir/dates.hpp"
#include "stsir/errors.hpp"
#include "stsir/forecast.hpp"
#include "stsir/mcmc.hpp"
#include "stsir/model.hpp"

namespace stsir {

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline DataModel parse_data_model(const std::string& s) {
    if (s == "poisson") return DataModel::Poisson;
    if (s == "lognormal") return DataModel::LogNormal;
    throw ConfigError("data_model must be 'poisson' or 'lognormal', got '" + s + "'");
}

inline std::string data_model_name(DataModel d) {
    return d == DataModel::Poisson ? "poisson" : "lognormal";
}

inline PriorConfig prior_from_json(const json& j) {
    PriorConfig pc;
    pc.fixed_effect_prec_shape = j.value("fixed_effect_prec_shape", pc.fixed_effect_prec_shape);
    pc.fixed_effect_prec_rate = j.value("fixed_effect_prec_rate", pc.fixed_effect_prec_rate);
    pc.icar_prec_shape = j.value("icar_prec_shape", pc.icar_prec_shape);
    pc.icar_prec_rate = j.value("icar_prec_rate", pc.icar_prec_rate);
    pc.lognormal_obs_prec_shape = j.value("lognormal_obs_prec_shape", pc.lognormal_obs_prec_shape);
    pc.lognormal_obs_prec_rate = j.value("lognormal_obs_prec_rate", pc.lognormal_obs_prec_rate);
    return pc;
}

inline json prior_to_json(const PriorConfig& pc) {
    return json{{"fixed_effect_prec_shape", pc.fixed_effect_prec_shape},
                {"fixed_effect_prec_rate", pc.fixed_effect_prec_rate},
                {"icar_prec_shape", pc.icar_prec_shape},
                {"icar_prec_rate", pc.icar_prec_rate},
                {"lognormal_obs_prec_shape", pc.lognormal_obs_prec_shape},
                {"lognormal_obs_prec_rate", pc.lognormal_obs_prec_rate}};
}

inline ModelSpec model_spec_from_json(const json& j) {
    ModelSpec spec;
    try {
        const int v = j.value("variant", 3);
        if (v < 1 || v > 5) throw ConfigError("variant must be 1..5");
        spec.variant = static_cast<Variant>(v);
        spec.phi = j.value("phi", spec.phi);
        spec.beta_rc = j.value("beta_rc", spec.beta_rc);
        if (j.contains("data_model")) spec.data_model = parse_data_model(j.at("data_model"));
        spec.offset = j.value("offset", spec.offset);
        spec.include_icar = j.value("include_icar", spec.include_icar);
        spec.m4_text_form = j.value("m4_text_form", spec.m4_text_form);
        if (j.contains("prior")) spec.prior = prior_from_json(j.at("prior"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
    spec.validate();
    return spec;
}

inline json model_spec_to_json(const ModelSpec& spec) {
    return json{{"variant", static_cast<int>(spec.variant)},
                {"phi", spec.phi},
                {"beta_rc", spec.beta_rc},
                {"data_model", data_model_name(spec.data_model)},
                {"offset", spec.offset},
                {"include_icar", spec.include_icar},
                {"m4_text_form", spec.m4_text_form},
                {"prior", prior_to_json(spec.prior)}};
}

inline SamplerConfig sampler_from_json(const json& j) {
    SamplerConfig c;
    try {
        c.n_iter = j.value("n_iter", c.n_iter);
        c.burn_in = j.value("burn_in", c.burn_in);
        c.thin = j.value("thin", c.thin);
        c.seed = j.value("seed", c.seed);
        c.adapt_window = j.value("adapt_window", c.adapt_window);
        c.target_accept = j.value("target_accept", c.target_accept);
        c.init_scale = j.value("init_scale", c.init_scale);
        c.store_mu = j.value("store_mu", c.store_mu);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sampler config: ") + e.what());
    }
    c.validate();
    return c;
}

inline json sampler_to_json(const SamplerConfig& c) {
    return json{{"n_iter", c.n_iter},     {"burn_in", c.burn_in},
                {"thin", c.thin},         {"seed", c.seed},
                {"adapt_window", c.adapt_window}, {"target_accept", c.target_accept},
                {"init_scale", c.init_scale},     {"store_mu", c.store_mu}};
}

/// End-to-end run description consumed by the CLI subcommands.
struct RunConfig {
    std::string cases_path, population_path, covariate_path, adjacency_path;
    Date start, end;
    ModelSpec model;
    SamplerConfig sampler;
    std::string output_dir = "out";
    std::string mode = "raw"; // raw | smoothed

    void apply_mode() {
        if (mode == "smoothed")
            model.data_model = DataModel::LogNormal;
        else if (mode == "raw")
            model.data_model = DataModel::Poisson;
        else
            throw ConfigError("mode must be 'raw' or 'smoothed', got '" + mode + "'");
    }
};

inline RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    try {
        const json& paths = j.at("paths");
        c.cases_path = paths.at("cases");
        c.population_path = paths.at("population");
        c.covariate_path = paths.value("covariate", "");
        c.adjacency_path = paths.value("adjacency", "");
        c.start = Date::parse(j.at("date_range").at("start"));
        c.end = Date::parse(j.at("date_range").at("end"));
        if (j.contains("model")) c.model = model_spec_from_json(j.at("model"));
        if (j.contains("sampler")) c.sampler = sampler_from_json(j.at("sampler"));
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("mode")) {
            c.mode = j.at("mode");
        } else {
            c.mode = c.model.data_model == DataModel::LogNormal ? "smoothed" : "raw";
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    c.apply_mode();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(load_json_file(path));
}

inline ParamVector params_from_json(const json& j, const ModelSpec& spec, int m, int T) {
    ParamVector p;
    try {
        p.b0 = j.value("b0", p.b0);
        p.b1 = j.value("b1", p.b1);
        p.b2 = j.value("b2", p.b2);
        p.tau0 = j.value("tau0", p.tau0);
        p.tau1 = j.value("tau1", p.tau1);
        p.tau2 = j.value("tau2", p.tau2);
        p.tau_b = j.value("tau_b", p.tau_b);
        p.tau_v = j.value("tau_v", p.tau_v);
        p.tau_y = j.value("tau_y", p.tau_y);
        auto load_vec = [&](const char* key, std::vector<double>& dst, int len) {
            if (j.contains(key)) {
                dst = j.at(key).get<std::vector<double>>();
                if (static_cast<int>(dst.size()) != len)
                    throw ConfigError(std::string(key) + " must have length " + std::to_string(len));
            }
        };
        if (spec.has_b0_time()) {
            p.b0_time.assign(T, j.value("b0", -9.0));
            load_vec("b0_time", p.b0_time, T);
        }
        if (spec.has_b0_space()) {
            p.b0_space.assign(m, 0.0);
            load_vec("b0_space", p.b0_space, m);
        }
        if (spec.has_b_spatial()) {
            p.b_spatial.assign(m, 0.0);
            load_vec("b_spatial", p.b_spatial, m);
        }
        if (spec.has_v()) {
            p.v_uncorr.assign(m, 0.0);
            load_vec("v", p.v_uncorr, m);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    return p;
}

/// Scenario JSON for the simulator: m, T, seed, model, graph ("ring" or an
/// explicit edge list), sus_init / poverty (scalar broadcast or arrays), and
/// true_params (b_spatial may be the string "icar" to draw from the prior).
inline SimScenario scenario_from_json(const json& j) {
    SimScenario sc;
    try {
        sc.m = j.at("m");
        sc.T = j.at("T");
        sc.seed = j.value("seed", sc.seed);
        if (j.contains("start_date")) sc.start_date = Date::parse(j.at("start_date"));
        if (j.contains("model")) sc.spec = model_spec_from_json(j.at("model"));
        sc.death_prob = j.value("death_prob", sc.death_prob);

        if (j.contains("graph")) {
            const json& g = j.at("graph");
            if (g.is_string() && g == "ring") {
                sc.graph = AdjacencyGraph::ring(sc.m);
            } else if (g.is_object() && g.contains("edges")) {
                std::vector<std::pair<int, int>> edges;
                for (const auto& e : g.at("edges"))
                    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
                sc.graph = AdjacencyGraph::from_edges(sc.m, edges);
            } else {
                throw ConfigError("graph must be \"ring\" or {\"edges\": [[a,b],...]}");
            }
        }

        auto load_broadcast = [&](const char* key, std::vector<double>& dst) {
            if (!j.contains(key)) return;
            const json& v = j.at(key);
            if (v.is_number())
                dst.assign(sc.m, v.get<double>());
            else
                dst = v.get<std::vector<double>>();
            if (static_cast<int>(dst.size()) != sc.m)
                throw ConfigError(std::string(key) + " must have length m");
        };
        load_broadcast("sus_init", sc.sus_init);
        load_broadcast("poverty", sc.poverty);

        if (j.contains("true_params")) {
            const json& tp = j.at("true_params");
            if (tp.contains("b_spatial") && tp.at("b_spatial").is_string()) {
                if (tp.at("b_spatial") != "icar")
                    throw ConfigError("b_spatial must be an array or the string \"icar\"");
                json tp2 = tp;
                tp2.erase("b_spatial");
                sc.true_params = params_from_json(tp2, sc.spec, sc.m, sc.T);
                Rng r(sc.seed ^ 0x1ca2b055u);
                sc.true_params.b_spatial =
                    sample_icar(sc.graph, sc.true_params.tau_b, r);
            } else {
                sc.true_params = params_from_json(tp, sc.spec, sc.m, sc.T);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    sc.validate();
    return sc;
}

inline json params_to_json(const ParamVector& p, const ModelSpec& spec) {
    json j{{"b0", p.b0},     {"b1", p.b1},     {"b2", p.b2},   {"tau0", p.tau0},
           {"tau1", p.tau1}, {"tau2", p.tau2}, {"tau_b", p.tau_b}, {"tau_v", p.tau_v},
           {"tau_y", p.tau_y}};
    if (spec.has_b0_time()) j["b0_time"] = p.b0_time;
    if (spec.has_b0_space()) j["b0_space"] = p.b0_space;
    if (spec.has_b_spatial()) j["b_spatial"] = p.b_spatial;
    if (spec.has_v()) j["v"] = p.v_uncorr;
    return j;
}

} // namespace stsir
