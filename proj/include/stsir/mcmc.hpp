#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stsir/likelihood.hpp"
#include "stsir/model.hpp"
#include "stsir/rng.hpp"

namespace stsir {

/// Run-length and adaptation settings for one chain.
struct SamplerConfig {
    long n_iter = 60000;
    long burn_in = 20000;
    long thin = 10;
    std::uint64_t seed = 1;
    int adapt_window = 50;      // sweeps between proposal-scale adaptations
    double target_accept = 0.44;
    double init_scale = 0.1;
    bool store_mu = true;       // keep per-draw mean surfaces (needed for MSE/MSPE/replicates)
    std::set<std::string> frozen; // block names held at their initial values

    void validate() const {
        if (n_iter < 1) throw ConfigError("n_iter must be positive");
        if (burn_in < 0 || burn_in >= n_iter) throw ConfigError("burn_in must satisfy 0 <= burn_in < n_iter");
        if (thin < 1) throw ConfigError("thin must be >= 1");
        if (adapt_window < 10) throw ConfigError("adapt_window must be >= 10");
        if (!(target_accept > 0.0 && target_accept < 1.0))
            throw ConfigError("target_accept must lie in (0,1)");
        if (!(init_scale > 0.0)) throw ConfigError("init_scale must be positive");
    }

    long retained() const { return (n_iter - burn_in + thin - 1) / thin; }
};

/// Stored post-burn-in draws with per-draw deviance.
struct ChainTrace {
    std::vector<std::string> param_names;     // flattening schema for CSV export
    std::vector<ParamVector> draws;
    std::vector<double> deviances;
    std::vector<MatrixD> mu_snapshots;        // empty unless store_mu
    std::map<std::string, double> accept_rates; // per block, post-burn-in
};

/// Conjugate gamma update for a precision: gamma(shape + rank/2,
/// rate + quadratic_form/2). rank=1 and qf=b^2 for a scalar N(0, tau^-1);
/// rank=m-1 and the pairwise-difference sum for the ICAR.
inline double gibbs_precision(double prior_shape, double prior_rate, double quadratic_form,
                              long rank, Rng& rng) {
    if (rank < 1) throw NumericalError("gibbs_precision: rank must be >= 1");
    if (quadratic_form < 0.0) throw NumericalError("gibbs_precision: negative quadratic form");
    return rng.gamma(prior_shape + 0.5 * static_cast<double>(rank),
                     prior_rate + 0.5 * quadratic_form);
}

inline double gibbs_precision(double prior_shape, double prior_rate,
                              std::span<const double> values, Rng& rng) {
    double qf = 0.0;
    for (double v : values) qf += v * v;
    return gibbs_precision(prior_shape, prior_rate, qf, static_cast<long>(values.size()), rng);
}

/// Starting point: b0-family at -9 (so exp(b0)*S is order one for typical
/// county populations), spatial vectors at 0, precisions at 1.
inline ParamVector initialize(const ModelSpec& spec, int m, int T) {
    ParamVector p;
    if (spec.has_b0_scalar()) p.b0 = -9.0;
    if (spec.has_b0_time()) p.b0_time.assign(T, -9.0);
    if (spec.has_b0_space()) p.b0_space.assign(m, 0.0);
    if (spec.has_b_spatial()) p.b_spatial.assign(m, 0.0);
    if (spec.has_v()) p.v_uncorr.assign(m, 0.0);
    return p;
}

/// Column layout for trace export; indices in names are 1-based.
inline std::vector<std::string> param_names(const ModelSpec& spec, int m, int T) {
    std::vector<std::string> names;
    if (spec.has_b0_scalar()) names.push_back("b0");
    if (spec.has_b0_time())
        for (int j = 1; j <= T; ++j) names.push_back("b0_time[" + std::to_string(j) + "]");
    if (spec.has_b0_space())
        for (int i = 1; i <= m; ++i) names.push_back("b0_space[" + std::to_string(i) + "]");
    names.push_back("b1");
    if (spec.has_b2()) names.push_back("b2");
    if (spec.has_b_spatial())
        for (int i = 1; i <= m; ++i) names.push_back("b_spatial[" + std::to_string(i) + "]");
    if (spec.has_v())
        for (int i = 1; i <= m; ++i) names.push_back("v[" + std::to_string(i) + "]");
    if (spec.has_b0_scalar() || spec.has_b0_time()) names.push_back("tau0");
    names.push_back("tau1");
    if (spec.has_b2()) names.push_back("tau2");
    if (spec.has_b_spatial() || spec.has_b0_space()) names.push_back("tau_b");
    if (spec.has_v()) names.push_back("tau_v");
    if (spec.data_model == DataModel::LogNormal) names.push_back("tau_y");
    return names;
}

inline std::vector<double> flatten_params(const ParamVector& p, const ModelSpec& spec) {
    std::vector<double> out;
    if (spec.has_b0_scalar()) out.push_back(p.b0);
    if (spec.has_b0_time()) out.insert(out.end(), p.b0_time.begin(), p.b0_time.end());
    if (spec.has_b0_space()) out.insert(out.end(), p.b0_space.begin(), p.b0_space.end());
    out.push_back(p.b1);
    if (spec.has_b2()) out.push_back(p.b2);
    if (spec.has_b_spatial()) out.insert(out.end(), p.b_spatial.begin(), p.b_spatial.end());
    if (spec.has_v()) out.insert(out.end(), p.v_uncorr.begin(), p.v_uncorr.end());
    if (spec.has_b0_scalar() || spec.has_b0_time()) out.push_back(p.tau0);
    out.push_back(p.tau1);
    if (spec.has_b2()) out.push_back(p.tau2);
    if (spec.has_b_spatial() || spec.has_b0_space()) out.push_back(p.tau_b);
    if (spec.has_v()) out.push_back(p.tau_v);
    if (spec.data_model == DataModel::LogNormal) out.push_back(p.tau_y);
    return out;
}

inline ParamVector unflatten_params(std::span<const double> row, const ModelSpec& spec, int m, int T) {
    ParamVector p;
    std::size_t k = 0;
    auto take = [&]() {
        if (k >= row.size()) throw DataError("trace row is shorter than the parameter layout");
        return row[k++];
    };
    if (spec.has_b0_scalar()) p.b0 = take();
    if (spec.has_b0_time()) {
        p.b0_time.resize(T);
        for (int j = 0; j < T; ++j) p.b0_time[j] = take();
    }
    if (spec.has_b0_space()) {
        p.b0_space.resize(m);
        for (int i = 0; i < m; ++i) p.b0_space[i] = take();
    }
    p.b1 = take();
    if (spec.has_b2()) p.b2 = take();
    if (spec.has_b_spatial()) {
        p.b_spatial.resize(m);
        for (int i = 0; i < m; ++i) p.b_spatial[i] = take();
    }
    if (spec.has_v()) {
        p.v_uncorr.resize(m);
        for (int i = 0; i < m; ++i) p.v_uncorr[i] = take();
    }
    if (spec.has_b0_scalar() || spec.has_b0_time()) p.tau0 = take();
    p.tau1 = take();
    if (spec.has_b2()) p.tau2 = take();
    if (spec.has_b_spatial() || spec.has_b0_space()) p.tau_b = take();
    if (spec.has_v()) p.tau_v = take();
    if (spec.data_model == DataModel::LogNormal) p.tau_y = take();
    return p;
}

namespace detail {

/// Per-scalar random-walk state with windowed adaptation counters.
struct MhBlock {
    double scale = 0.1;
    long win_tries = 0, win_accepts = 0;
    long post_tries = 0, post_accepts = 0;

    void tally(bool accepted, bool adapting) {
        if (adapting) {
            ++win_tries;
            win_accepts += accepted;
        } else {
            ++post_tries;
            post_accepts += accepted;
        }
    }

    void adapt(double target) {
        if (win_tries == 0) return;
        const double rate = static_cast<double>(win_accepts) / static_cast<double>(win_tries);
        if (rate > target)
            scale *= std::exp(0.05);
        else if (rate < target)
            scale *= std::exp(-0.05);
        win_tries = win_accepts = 0;
    }
};

inline void recenter(std::vector<double>& b) {
    double mean = 0.0;
    for (double v : b) mean += v;
    mean /= static_cast<double>(b.size());
    for (double& v : b) v -= mean;
}

} // namespace detail

/// Metropolis-within-Gibbs sampler. Each sweep updates, in fixed order: the
/// intercept block (scalar b0, per-day b0_time, or per-region b0_space with
/// re-centering), b1, b2, the ICAR residuals with re-centering, the v_i, then
/// exact Gibbs draws for the active precisions. Proposal scales adapt toward
/// target_accept during burn-in only, so retained draws keep the Markov
/// property. Deterministic given config.seed.
inline ChainTrace run_chain(const PanelData& panel, const ModelSpec& spec,
                            const AdjacencyGraph* graph, const SamplerConfig& config,
                            const ParamVector* init = nullptr) {
    config.validate();
    spec.validate();
    panel.validate();

    ModelWorkspace ws(panel, spec, graph);
    const int m = ws.m, T = ws.T;
    Rng rng(config.seed);

    ParamVector p = init ? *init : initialize(spec, m, T);
    if (spec.has_b0_time() && static_cast<int>(p.b0_time.size()) != T)
        throw ConfigError("initial b0_time length does not match T");

    {
        const double ll0 = ws.loglik_all(p) + log_prior(p, spec, graph);
        if (!std::isfinite(ll0))
            throw NumericalError(
                "non-finite posterior at initialization; check the data offsets (model.offset)");
    }

    const bool frozen_b0 = config.frozen.count("b0") || config.frozen.count("b0_time") ||
                           config.frozen.count("b0_space");
    auto frozen = [&](const char* name) { return config.frozen.count(name) > 0; };

    // one MhBlock per scalar
    detail::MhBlock proto;
    proto.scale = config.init_scale;
    const int n_icpt = spec.has_b0_time() ? T : (spec.has_b0_space() ? m : 1);
    std::vector<detail::MhBlock> blk_icpt(n_icpt, proto);
    detail::MhBlock blk_b1 = proto, blk_b2 = proto;
    std::vector<detail::MhBlock> blk_sp(spec.has_b_spatial() ? m : 0, proto);
    std::vector<detail::MhBlock> blk_v(spec.has_v() ? m : 0, proto);

    ChainTrace trace;
    trace.param_names = param_names(spec, m, T);
    trace.draws.reserve(config.retained());
    trace.deviances.reserve(config.retained());

    LatentState scratch = ws.state;

    auto mh_step = [&](double& val, detail::MhBlock& blk, bool adapting, auto&& affected_loglik,
                       auto&& prior_delta) {
        const double cur = val;
        const double prop = cur + blk.scale * rng.normal();
        const double ll_cur = affected_loglik();
        val = prop;
        const double ll_prop = affected_loglik();
        const double logr = (ll_prop - ll_cur) + prior_delta(cur, prop);
        const bool accept = std::log(rng.uniform_open()) < logr;
        if (!accept) val = cur;
        blk.tally(accept, adapting);
    };

    auto gauss_delta = [](double tau) {
        return [tau](double cur, double prop) { return -0.5 * tau * (prop * prop - cur * cur); };
    };
    auto icar_delta = [&](const std::vector<double>& b, int i) {
        return [&, i](double cur, double prop) {
            double d = 0.0;
            for (int l : graph->neighbors(i)) {
                const double dc = cur - b[l], dp = prop - b[l];
                d += dc * dc - dp * dp;
            }
            return 0.5 * p.tau_b * d;
        };
    };

    for (long s = 0; s < config.n_iter; ++s) {
        const bool adapting = s < config.burn_in;

        // intercept block
        if (!frozen_b0) {
            if (spec.has_b0_scalar()) {
                mh_step(p.b0, blk_icpt[0], adapting, [&] { return ws.loglik_all(p); },
                        gauss_delta(p.tau0));
            } else if (spec.has_b0_time()) {
                for (int j = 0; j < T; ++j)
                    mh_step(p.b0_time[j], blk_icpt[j], adapting,
                            [&] { return ws.loglik_col(j, p); }, gauss_delta(p.tau0));
            } else {
                for (int i = 0; i < m; ++i)
                    mh_step(p.b0_space[i], blk_icpt[i], adapting,
                            [&] { return ws.loglik_row(i, p); }, icar_delta(p.b0_space, i));
                detail::recenter(p.b0_space);
            }
        }

        if (!frozen("b1"))
            mh_step(p.b1, blk_b1, adapting, [&] { return ws.loglik_all(p); }, gauss_delta(p.tau1));
        if (spec.has_b2() && !frozen("b2"))
            mh_step(p.b2, blk_b2, adapting, [&] { return ws.loglik_all(p); }, gauss_delta(p.tau2));

        if (spec.has_b_spatial() && !frozen("b_spatial")) {
            for (int i = 0; i < m; ++i)
                mh_step(p.b_spatial[i], blk_sp[i], adapting, [&] { return ws.loglik_row(i, p); },
                        icar_delta(p.b_spatial, i));
            detail::recenter(p.b_spatial);
        }

        if (spec.has_v() && !frozen("v"))
            for (int i = 0; i < m; ++i)
                mh_step(p.v_uncorr[i], blk_v[i], adapting, [&] { return ws.loglik_row(i, p); },
                        gauss_delta(p.tau_v));

        // conjugate precision draws
        const PriorConfig& pc = spec.prior;
        if (!frozen("tau0")) {
            if (spec.has_b0_scalar())
                p.tau0 = gibbs_precision(pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate,
                                         p.b0 * p.b0, 1, rng);
            else if (spec.has_b0_time())
                p.tau0 = gibbs_precision(pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate,
                                         std::span<const double>(p.b0_time), rng);
        }
        if (!frozen("tau1"))
            p.tau1 = gibbs_precision(pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate,
                                     p.b1 * p.b1, 1, rng);
        if (spec.has_b2() && !frozen("tau2"))
            p.tau2 = gibbs_precision(pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate,
                                     p.b2 * p.b2, 1, rng);
        if (spec.has_v() && !frozen("tau_v"))
            p.tau_v = gibbs_precision(pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate,
                                      std::span<const double>(p.v_uncorr), rng);
        if (spec.data_model == DataModel::LogNormal && !frozen("tau_y"))
            p.tau_y = gibbs_precision(pc.lognormal_obs_prec_shape, pc.lognormal_obs_prec_rate,
                                      ws.resid_quad_form(p), static_cast<long>(m) * T, rng);
        if ((spec.has_b_spatial() || spec.has_b0_space()) && !frozen("tau_b")) {
            const auto& b = spec.has_b0_space() ? p.b0_space : p.b_spatial;
            p.tau_b = gibbs_precision(pc.icar_prec_shape, pc.icar_prec_rate,
                                      icar_quad_form(b, *graph), m - 1, rng);
        }

        if (adapting && (s + 1) % config.adapt_window == 0) {
            for (auto& b : blk_icpt) b.adapt(config.target_accept);
            blk_b1.adapt(config.target_accept);
            blk_b2.adapt(config.target_accept);
            for (auto& b : blk_sp) b.adapt(config.target_accept);
            for (auto& b : blk_v) b.adapt(config.target_accept);
        }

        if (s >= config.burn_in && (s - config.burn_in) % config.thin == 0) {
            trace.draws.push_back(p);
            ws.fill_mu(p, scratch.mu);
            trace.deviances.push_back(total_deviance(panel, scratch, spec, p.tau_y));
            if (config.store_mu) trace.mu_snapshots.push_back(scratch.mu);
        }
    }

    auto rate_of = [](const std::vector<detail::MhBlock>& blocks) {
        long tries = 0, acc = 0;
        for (const auto& b : blocks) {
            tries += b.post_tries;
            acc += b.post_accepts;
        }
        return tries > 0 ? static_cast<double>(acc) / static_cast<double>(tries) : 0.0;
    };
    if (!frozen_b0) {
        const char* name = spec.has_b0_time() ? "b0_time"
                           : spec.has_b0_space() ? "b0_space" : "b0";
        trace.accept_rates[name] = rate_of(blk_icpt);
    }
    if (!frozen("b1")) trace.accept_rates["b1"] = rate_of({blk_b1});
    if (spec.has_b2() && !frozen("b2")) trace.accept_rates["b2"] = rate_of({blk_b2});
    if (spec.has_b_spatial() && !frozen("b_spatial")) trace.accept_rates["b_spatial"] = rate_of(blk_sp);
    if (spec.has_v() && !frozen("v")) trace.accept_rates["v"] = rate_of(blk_v);
    return trace;
}

} // namespace stsir
