#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stsir/adjacency.hpp"
#include "stsir/likelihood.hpp"
#include "stsir/mcmc.hpp"
#include "stsir/metrics.hpp"
#include "stsir/model.hpp"
#include "stsir/panel.hpp"
#include "stsir/rng.hpp"

namespace stsir {

/// One-day-ahead posterior predictive summary for a region.
struct ForecastResult {
    std::string region_id;
    double pred_mean = 0.0;
    double lower95 = 0.0;
    double upper95 = 0.0;
    long n_draws = 0;
};

/// Equal-tailed empirical quantile with linear interpolation (R type 7).
/// `sorted` must be ascending.
inline double quantile_sorted(std::span<const double> sorted, double prob) {
    const std::size_t n = sorted.size();
    if (n == 0) throw NumericalError("quantile of empty sample");
    if (n == 1) return sorted[0];
    const double h = prob * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double w = h - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

/// One-step forecast for day T+1, conditioning on the observed final day:
/// per retained draw, the susceptibles are advanced one accounting step, the
/// mean is formed from day-T counts, and a predictive count is drawn
/// (Poisson, or log-normal in smoothed mode). Each region consumes a
/// substream derived from its own data row, so results are exactly
/// equivariant under region relabeling.
inline std::vector<ForecastResult> one_step_forecast(const ChainTrace& trace,
                                                     const PanelData& panel,
                                                     const ModelSpec& spec,
                                                     const AdjacencyGraph* graph,
                                                     std::uint64_t seed) {
    if (trace.draws.empty()) throw DataError("one_step_forecast: empty trace");
    if (panel.T() < 2) throw DataError("one_step_forecast: panel needs at least 2 days");
    ModelWorkspace ws(panel, spec, graph);
    const int m = ws.m, T = ws.T;
    const MatrixD& counts = ws.counts;

    // day-(T+1) susceptibles from the observed final day
    std::vector<double> sus_next(m);
    for (int i = 0; i < m; ++i) {
        const double rc = (T - 1 == 0) ? 0.0 : spec.beta_rc * counts(i, T - 1);
        const double dec = counts(i, T - 1) + ws.state.asym(i, T - 1) + rc +
                           static_cast<double>(panel.deaths(i, T - 1));
        sus_next[i] = std::max(0.0, ws.state.sus(i, T - 1) - dec);
    }

    std::vector<ForecastResult> out(m);
    std::vector<double> draws_i;
    draws_i.reserve(trace.draws.size());
    for (int i = 0; i < m; ++i) {
        std::uint64_t h = fnv1a(&counts.data()[i * T], T * sizeof(double));
        h = fnv1a(&panel.sus_init[i], sizeof(double), h);
        h = fnv1a(&ws.x[i], sizeof(double), h);
        Rng rng(seed ^ h);
        const double nsum = (spec.variant == Variant::M2)
                                ? neighbor_ty_sum(counts, spec.phi, *graph, i, T)
                                : 0.0;
        draws_i.clear();
        for (const ParamVector& p : trace.draws) {
            ParamVector pf = p;
            if (spec.has_b0_time()) pf.b0_time.push_back(pf.b0_time.back()); // carry final day rate
            const double lp = log_mean(spec, pf, i, T, sus_next[i], counts(i, T - 1),
                                       ws.state.asym(i, T - 1), nsum, ws.x[i]);
            double y;
            if (spec.data_model == DataModel::Poisson)
                y = static_cast<double>(rng.poisson(std::exp(lp)));
            else
                y = std::exp(rng.normal(lp, 1.0 / std::sqrt(p.tau_y)));
            draws_i.push_back(y);
        }
        std::sort(draws_i.begin(), draws_i.end());
        ForecastResult& r = out[i];
        r.region_id = panel.region_ids[i];
        r.n_draws = static_cast<long>(draws_i.size());
        r.pred_mean = mean_of(draws_i);
        r.lower95 = quantile_sorted(draws_i, 0.025);
        r.upper95 = quantile_sorted(draws_i, 0.975);
    }
    return out;
}

/// Posterior predictive replicates of the in-sample panel: one y_rep matrix
/// per stored mean surface, drawn elementwise. Feeds the MSPE profile.
inline std::vector<MatrixD> replicate_within_sample(const ChainTrace& trace,
                                                    const ModelSpec& spec, std::uint64_t seed) {
    if (trace.mu_snapshots.empty())
        throw DataError(
            "replicate_within_sample: trace has no mean snapshots; rerun the fit with store_mu");
    Rng rng(seed);
    std::vector<MatrixD> reps;
    reps.reserve(trace.mu_snapshots.size());
    for (std::size_t s = 0; s < trace.mu_snapshots.size(); ++s) {
        const MatrixD& mu = trace.mu_snapshots[s];
        MatrixD rep(mu.rows(), mu.cols());
        const double tau_y = trace.draws[s].tau_y;
        for (std::size_t k = 0; k < mu.data().size(); ++k) {
            if (spec.data_model == DataModel::Poisson)
                rep.data()[k] = static_cast<double>(rng.poisson(mu.data()[k]));
            else
                rep.data()[k] =
                    std::exp(rng.normal(std::log(mu.data()[k]), 1.0 / std::sqrt(tau_y)));
        }
        reps.push_back(std::move(rep));
    }
    return reps;
}

/// Ground truth description for the synthetic-panel generator.
struct SimScenario {
    int m = 0;
    int T = 0;
    std::uint64_t seed = 1;
    Date start_date = Date::from_ymd(2020, 3, 1);
    ModelSpec spec;
    AdjacencyGraph graph; // required when spec.needs_graph()
    std::vector<double> sus_init;
    std::vector<double> poverty;
    ParamVector true_params;
    double death_prob = 0.02; // deaths ~ Binomial(y_sym two days earlier, death_prob)

    void validate() const {
        if (m < 1 || T < 2) throw ConfigError("scenario needs m >= 1 regions and T >= 2 days");
        if (static_cast<int>(sus_init.size()) != m) throw ConfigError("scenario sus_init length != m");
        if (spec.needs_covariate() && static_cast<int>(poverty.size()) != m)
            throw ConfigError("scenario poverty length != m");
        if (spec.needs_graph() && graph.m() != m)
            throw ConfigError("scenario requires an adjacency graph over m regions");
        spec.validate();
    }
};

/// Draws a sum-to-zero ICAR realization by Gibbs-sweeping the conditional
/// normals and re-centering; used to set true spatial effects in scenarios.
inline std::vector<double> sample_icar(const AdjacencyGraph& g, double tau_b, Rng& rng,
                                       int sweeps = 400) {
    std::vector<double> b(g.m(), 0.0);
    for (int s = 0; s < sweeps; ++s) {
        for (int i = 0; i < g.m(); ++i) {
            double msum = 0.0;
            for (int l : g.neighbors(i)) msum += b[l];
            const double ni = static_cast<double>(g.num(i));
            b[i] = rng.normal(msum / ni, 1.0 / std::sqrt(tau_b * ni));
        }
        detail::recenter(b);
    }
    return b;
}

inline std::vector<std::string> synthetic_region_ids(int m) {
    std::vector<std::string> ids(m);
    for (int i = 0; i < m; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "9%04d", i + 1);
        ids[i] = buf;
    }
    return ids;
}

/// Forward-simulates a panel from known parameters: day-1 counts seeded as
/// Poisson(0.001 * sus_init), then for each later day an accounting update,
/// the variant mean from the previous day's counts, and a Poisson draw.
/// Deaths lag cases by two days. Aborts on explosive settings.
inline PanelData simulate_panel(const SimScenario& sc) {
    sc.validate();
    const int m = sc.m, T = sc.T;
    Rng rng(sc.seed);

    PanelData panel;
    panel.region_ids = synthetic_region_ids(m);
    panel.dates.resize(T);
    for (int j = 0; j < T; ++j) panel.dates[j] = sc.start_date + j;
    panel.sym = MatrixI(m, T);
    panel.deaths = MatrixI(m, T);
    panel.sus_init = sc.sus_init;
    panel.poverty = sc.poverty;

    MatrixD counts(m, T), asym(m, T), sus(m, T);
    std::vector<long long> cum(m, 0);
    for (int i = 0; i < m; ++i) {
        sus(i, 0) = sc.sus_init[i];
        const long long y0 = rng.poisson(kDay1MeanFactor * sc.sus_init[i]);
        panel.sym(i, 0) = y0;
        cum[i] += y0;
        counts(i, 0) = static_cast<double>(y0);
        asym(i, 0) = sc.spec.phi * counts(i, 0);
    }
    for (int j = 1; j < T; ++j) {
        for (int i = 0; i < m; ++i) {
            const double rc_prev = (j - 1 == 0) ? 0.0 : sc.spec.beta_rc * counts(i, j - 1);
            const double dec = counts(i, j - 1) + asym(i, j - 1) + rc_prev +
                               static_cast<double>(panel.deaths(i, j - 1));
            sus(i, j) = std::max(0.0, sus(i, j - 1) - dec);
        }
        for (int i = 0; i < m; ++i) {
            const double nsum = (sc.spec.variant == Variant::M2)
                                    ? neighbor_ty_sum(counts, sc.spec.phi, sc.graph, i, j)
                                    : 0.0;
            const double x_i = sc.poverty.empty() ? 0.0 : sc.poverty[i];
            const double lp = log_mean(sc.spec, sc.true_params, i, j, sus(i, j), counts(i, j - 1),
                                       asym(i, j - 1), nsum, x_i);
            const double mu = std::exp(lp);
            if (!(mu <= 10.0 * sc.sus_init[i]))
                throw NumericalError("explosive scenario: day " + std::to_string(j + 1) +
                                     " mean exceeds 10x the susceptible baseline in region " +
                                     panel.region_ids[i]);
            const long long y = rng.poisson(mu);
            panel.sym(i, j) = y;
            cum[i] += y;
            if (static_cast<double>(cum[i]) >= sc.sus_init[i])
                throw NumericalError("explosive scenario: cumulative cases reach the susceptible "
                                     "baseline in region " + panel.region_ids[i]);
            counts(i, j) = static_cast<double>(y);
            asym(i, j) = sc.spec.phi * counts(i, j);
            if (j >= 2) panel.deaths(i, j) = rng.binomial(panel.sym(i, j - 2), sc.death_prob);
        }
    }
    panel.validate();
    return panel;
}

} // namespace stsir
