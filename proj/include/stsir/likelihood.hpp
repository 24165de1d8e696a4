#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "stsir/adjacency.hpp"
#include "stsir/model.hpp"
#include "stsir/panel.hpp"

namespace stsir {

/// Precomputed likelihood workspace for one (panel, spec) pair. The
/// susceptible path and the lagged-count regressors are data-only, so every
/// linear predictor reduces to a handful of additions; this is what makes the
/// per-scalar Metropolis sweeps cheap. lp_cell must agree exactly with
/// log_mean (the slow reference route), which the tests enforce.
class ModelWorkspace {
public:
    ModelWorkspace(const PanelData& panel, const ModelSpec& spec, const AdjacencyGraph* graph)
        : m(panel.m()), T(panel.T()), spec(spec), graph(graph),
          counts(modeled_counts(panel, spec)), state(accounting_forward(panel, spec)) {
        if (spec.needs_graph() && (!graph || graph->m() != m))
            throw DataError("model variant requires an adjacency graph over the panel regions");
        if (spec.needs_covariate() && panel.poverty.empty())
            throw DataError("model variant requires the poverty covariate");
        x = panel.poverty.empty() ? std::vector<double>(m, 0.0) : panel.poverty;

        const double e = spec.offset;
        lsus = MatrixD(m, T);
        trans = MatrixD(m, T);
        day1_mu.resize(m);
        for (int i = 0; i < m; ++i) {
            day1_mu[i] = kDay1MeanFactor * panel.sus_init[i];
            for (int j = 1; j < T; ++j) {
                lsus(i, j) = std::log(state.sus(i, j) + e);
                const double sym_prev = counts(i, j - 1);
                const double asym_prev = state.asym(i, j - 1);
                const double ty = sym_prev + asym_prev;
                switch (spec.variant) {
                case Variant::M2:
                    trans(i, j) = std::log(ty + neighbor_ty_sum(counts, spec.phi, *graph, i, j) + e);
                    break;
                case Variant::M4:
                    trans(i, j) = spec.m4_text_form
                                      ? std::log(ty + e)
                                      : std::log(sym_prev + e) + std::log(asym_prev + e);
                    break;
                default:
                    trans(i, j) = std::log(ty + e);
                }
            }
        }

        if (spec.data_model == DataModel::Poisson) {
            lgamma_y = MatrixD(m, T);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < T; ++j)
                    lgamma_y(i, j) = std::lgamma(counts(i, j) + 1.0);
        } else {
            ystar = MatrixD(m, T);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < T; ++j)
                    ystar(i, j) = std::log(counts(i, j) + spec.offset);
        }
    }

    /// Linear predictor log mu_ij for j >= 1.
    double lp_cell(int i, int j, const ParamVector& p) const {
        double icpt;
        switch (spec.variant) {
        case Variant::M4: icpt = p.b0_time[j]; break;
        case Variant::M5: icpt = p.b0_space[i] + p.v_uncorr[i]; break;
        default: icpt = p.b0;
        }
        const double b_sp = spec.has_b_spatial() ? p.b_spatial[i] : 0.0;
        const double b2x = spec.has_b2() ? p.b2 * x[i] : 0.0;
        return lsus(i, j) + icpt + p.b1 * trans(i, j) + b2x + b_sp;
    }

    /// Log likelihood of cell (i,j); j=0 uses the pinned day-1 mean.
    double loglik_cell(int i, int j, const ParamVector& p) const {
        if (spec.data_model == DataModel::Poisson) {
            if (j == 0) {
                const double mu = day1_mu[i];
                return counts(i, 0) * std::log(mu) - mu - lgamma_y(i, 0);
            }
            const double lp = lp_cell(i, j, p);
            return counts(i, j) * lp - std::exp(lp) - lgamma_y(i, j);
        }
        const double mustar = (j == 0) ? std::log(day1_mu[i]) : lp_cell(i, j, p);
        const double r = ystar(i, j) - mustar;
        return 0.5 * (std::log(p.tau_y) - std::log(2.0 * std::numbers::pi)) -
               0.5 * p.tau_y * r * r;
    }

    double loglik_row(int i, const ParamVector& p) const {
        double s = 0.0;
        for (int j = 0; j < T; ++j) s += loglik_cell(i, j, p);
        return s;
    }

    double loglik_col(int j, const ParamVector& p) const {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += loglik_cell(i, j, p);
        return s;
    }

    double loglik_all(const ParamVector& p) const {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += loglik_row(i, p);
        return s;
    }

    /// Sum over all cells of (y* - mu*)^2, the tau_y Gibbs quadratic form.
    double resid_quad_form(const ParamVector& p) const {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < T; ++j) {
                const double mustar = (j == 0) ? std::log(day1_mu[i]) : lp_cell(i, j, p);
                const double r = ystar(i, j) - mustar;
                s += r * r;
            }
        return s;
    }

    /// Populates the mean surface for the current draw (day 1 included).
    void fill_mu(const ParamVector& p, MatrixD& mu) const {
        if (mu.rows() != static_cast<std::size_t>(m) || mu.cols() != static_cast<std::size_t>(T))
            mu = MatrixD(m, T);
        for (int i = 0; i < m; ++i) {
            mu(i, 0) = day1_mu[i];
            for (int j = 1; j < T; ++j) mu(i, j) = std::exp(lp_cell(i, j, p));
        }
    }

    const int m, T;
    const ModelSpec spec;
    const AdjacencyGraph* graph;
    MatrixD counts;   // modeled series (raw sym or smoothed)
    LatentState state;
    MatrixD lsus;     // log(S_ij + offset), j >= 1
    MatrixD trans;    // variant transmission regressor, j >= 1
    std::vector<double> x;
    MatrixD lgamma_y; // Poisson only
    MatrixD ystar;    // LogNormal only
    std::vector<double> day1_mu;
};

} // namespace stsir
