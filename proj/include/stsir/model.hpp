#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "stsir/adjacency.hpp"
#include "stsir/errors.hpp"
#include "stsir/matrix.hpp"
#include "stsir/panel.hpp"

namespace stsir {

// Day-1 cells have no lagged counts to condition on; their mean is pinned to
// 0.001 * S_i1. This factor is a fixed model constant, deliberately not tied
// to ModelSpec::offset (setting offset=0 for exact-deviance checks must not
// zero out day-1 means).
inline constexpr double kDay1MeanFactor = 1e-3;

enum class Variant { M1 = 1, M2 = 2, M3 = 3, M4 = 4, M5 = 5 };
enum class DataModel { Poisson, LogNormal };

inline std::string variant_name(Variant v) { return "M" + std::to_string(static_cast<int>(v)); }

/// Gamma hyperprior settings for the precision parameters.
struct PriorConfig {
    double fixed_effect_prec_shape = 2.0; // tau0, tau1, tau2, tau_v
    double fixed_effect_prec_rate = 0.5;
    double icar_prec_shape = 0.01; // tau_b
    double icar_prec_rate = 0.01;
    double lognormal_obs_prec_shape = 2.0; // tau_y
    double lognormal_obs_prec_rate = 0.5;

    void validate() const {
        const double v[] = {fixed_effect_prec_shape, fixed_effect_prec_rate,
                            icar_prec_shape,         icar_prec_rate,
                            lognormal_obs_prec_shape, lognormal_obs_prec_rate};
        for (double x : v)
            if (!(x > 0)) throw ConfigError("prior shapes and rates must be positive");
    }
};

/// Everything that fixes one model variant: which mean function, the
/// asymptomatic proportion, the recovery fraction, the data model, and the
/// log offsets.
struct ModelSpec {
    Variant variant = Variant::M3;
    double phi = 0.25;     // asymptomatic proportion: y_asym = phi * y_sym
    double beta_rc = 0.1;  // recovery removal fraction of symptomatic counts
    DataModel data_model = DataModel::Poisson;
    double offset = 1e-3;  // eps added inside every log of possibly-zero data
    bool include_icar = true;   // spatial residual b_i in M1-M4 ("minus ICAR" variants drop it)
    bool m4_text_form = false;  // M4 transmission as b1*log(Ty) instead of the split-log form
    PriorConfig prior;

    bool has_b2() const { return variant >= Variant::M3; }
    bool has_b_spatial() const { return include_icar && variant != Variant::M5; }
    bool has_v() const { return variant == Variant::M5; }
    bool has_b0_scalar() const {
        return variant == Variant::M1 || variant == Variant::M2 || variant == Variant::M3;
    }
    bool has_b0_time() const { return variant == Variant::M4; }
    bool has_b0_space() const { return variant == Variant::M5; }
    /// M2 needs neighbor sums, M5 an ICAR intercept, M1/M3/M4 an ICAR residual.
    bool needs_graph() const {
        return variant == Variant::M2 || variant == Variant::M5 || has_b_spatial();
    }
    bool needs_covariate() const { return has_b2(); }

    void validate() const {
        if (!(phi >= 0.0 && phi <= 1.0)) throw ConfigError("phi must lie in [0,1]");
        if (!(beta_rc >= 0.0 && beta_rc <= 1.0)) throw ConfigError("beta_rc must lie in [0,1]");
        if (!(offset > 0.0)) throw ConfigError("offset must be positive");
        prior.validate();
    }
};

/// Current values of all free parameters. Vectors are sized per variant and
/// left empty otherwise.
struct ParamVector {
    double b0 = 0.0;               // scalar intercept (M1-M3)
    std::vector<double> b0_time;   // per-day intercept b_0j (M4), length T
    std::vector<double> b0_space;  // per-region ICAR intercept b_0i (M5), sum-to-zero
    double b1 = 0.0;               // transmission loading on lagged counts
    double b2 = 0.0;               // poverty coefficient (M3-M5)
    std::vector<double> b_spatial; // ICAR residual b_i (M1-M4), sum-to-zero
    std::vector<double> v_uncorr;  // iid spatial residual v_i (M5)
    double tau0 = 1.0, tau1 = 1.0, tau2 = 1.0;
    double tau_b = 1.0, tau_v = 1.0, tau_y = 1.0;
};

/// Deterministic quantities derived from the data by the accounting
/// recursion. mu is left empty until a parameter draw fills it.
struct LatentState {
    MatrixD sus;           // S_ij
    MatrixD asym;          // phi * counts
    MatrixD removed_recov; // beta_rc * counts, zero on day 1
    MatrixD mu;            // mean surface; empty until populated
    bool sus_floored = false;
};

/// The count series the likelihood models: raw symptomatic counts for the
/// Poisson model, the 3-day smoothed series for the log-normal model.
inline MatrixD modeled_counts(const PanelData& panel, const ModelSpec& spec) {
    if (spec.data_model == DataModel::LogNormal) {
        if (panel.smoothed.empty())
            throw DataError("log-normal model requires the smoothed series; run in smoothed mode");
        return panel.smoothed;
    }
    return to_double(panel.sym);
}

/// SIR accounting recursion: S_ij = S_{i,j-1} - counts - asym - recovery -
/// deaths, floored at zero. Recovery removal on day 1 is zero (matching the
/// reference initialization); day-1 deaths do decrement day 2.
inline LatentState accounting_forward(const PanelData& panel, const ModelSpec& spec) {
    const int m = panel.m(), T = panel.T();
    const MatrixD counts = modeled_counts(panel, spec);
    LatentState st;
    st.sus = MatrixD(m, T);
    st.asym = MatrixD(m, T);
    st.removed_recov = MatrixD(m, T);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < T; ++j) {
            st.asym(i, j) = spec.phi * counts(i, j);
            st.removed_recov(i, j) = (j == 0) ? 0.0 : spec.beta_rc * counts(i, j);
        }
        st.sus(i, 0) = panel.sus_init[i];
        for (int j = 1; j < T; ++j) {
            const double dec = counts(i, j - 1) + st.asym(i, j - 1) +
                               st.removed_recov(i, j - 1) +
                               static_cast<double>(panel.deaths(i, j - 1));
            double s = st.sus(i, j - 1) - dec;
            if (s < 0.0) {
                s = 0.0;
                st.sus_floored = true;
            }
            st.sus(i, j) = s;
        }
    }
    return st;
}

/// Sum of lagged infectives Ty over the neighbors of region i, at day j-1.
inline double neighbor_ty_sum(const MatrixD& counts, double phi, const AdjacencyGraph& g,
                              int i, int j) {
    double s = 0.0;
    for (int l : g.neighbors(i)) s += (1.0 + phi) * counts(l, j - 1);
    return s;
}

/// log mu_ij = log(S_ij + offset) + log f(...), with log f per variant:
///   M1: b0 + b1*log(Ty+e) + b_i
///   M2: b0 + b1*log(Ty + sum_{l in delta_i} Ty_l + e) + b_i
///   M3: b0 + b1*log(Ty+e) + b2*x_i + b_i
///   M4: b0_j + b1*(log(sym+e)+log(asym+e)) + b2*x_i + b_i   (split-log form)
///   M5: b0_i + b1*log(Ty+e) + b2*x_i + v_i
/// where Ty = sym_{i,j-1} + asym_{i,j-1}. Day j must be >= 1 (zero-based);
/// day-1 means are pinned separately.
inline double log_mean(const ModelSpec& spec, const ParamVector& p, int i, int j,
                       double sus_ij, double sym_prev, double asym_prev,
                       double neighbor_ty_prev, double x_i) {
    const double e = spec.offset;
    const double ty = sym_prev + asym_prev;
    const double b_sp = (spec.has_b_spatial() && !p.b_spatial.empty()) ? p.b_spatial[i] : 0.0;
    double logf;
    switch (spec.variant) {
    case Variant::M1:
        logf = p.b0 + p.b1 * std::log(ty + e) + b_sp;
        break;
    case Variant::M2:
        logf = p.b0 + p.b1 * std::log(ty + neighbor_ty_prev + e) + b_sp;
        break;
    case Variant::M3:
        logf = p.b0 + p.b1 * std::log(ty + e) + p.b2 * x_i + b_sp;
        break;
    case Variant::M4: {
        const double trans = spec.m4_text_form
                                 ? p.b1 * std::log(ty + e)
                                 : p.b1 * (std::log(sym_prev + e) + std::log(asym_prev + e));
        logf = p.b0_time[j] + trans + p.b2 * x_i + b_sp;
        break;
    }
    case Variant::M5:
        logf = p.b0_space[i] + p.b1 * std::log(ty + e) + p.b2 * x_i + p.v_uncorr[i];
        break;
    default:
        throw ConfigError("unknown model variant");
    }
    return std::log(sus_ij + e) + logf;
}

/// -2 * log Poisson pmf with the reference code's offset guard:
/// -2*( y*log(mu+offset) - (mu+offset) - log(y!) ).
inline double poisson_deviance_cell(long long y, double mu, double offset) {
    if (!(mu > 0.0)) throw NumericalError("poisson_deviance_cell requires mu > 0");
    const double mo = mu + offset;
    return -2.0 * (static_cast<double>(y) * std::log(mo) - mo - std::lgamma(static_cast<double>(y) + 1.0));
}

/// Total deviance over all cells, day 1 included. Poisson mode sums
/// poisson_deviance_cell; log-normal mode sums -2*log N(y* | log mu, 1/tau_y)
/// with y* = log(y_sm + offset). state.mu must be fully populated.
inline double total_deviance(const PanelData& panel, const LatentState& state,
                             const ModelSpec& spec, double tau_y = 1.0) {
    const int m = panel.m(), T = panel.T();
    if (state.mu.empty() || state.mu.rows() != static_cast<std::size_t>(m) ||
        state.mu.cols() != static_cast<std::size_t>(T))
        throw NumericalError("total_deviance: mu is not populated");
    double dev = 0.0;
    if (spec.data_model == DataModel::Poisson) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < T; ++j)
                dev += poisson_deviance_cell(panel.sym(i, j), state.mu(i, j), spec.offset);
    } else {
        if (!(tau_y > 0.0)) throw NumericalError("total_deviance: tau_y must be positive");
        const double log2pi = std::log(2.0 * std::numbers::pi);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < T; ++j) {
                const double ystar = std::log(panel.smoothed(i, j) + spec.offset);
                const double mustar = std::log(state.mu(i, j));
                const double r = ystar - mustar;
                dev += log2pi - std::log(tau_y) + tau_y * r * r;
            }
    }
    return dev;
}

/// Joint intrinsic CAR log density (up to its additive constant):
/// ((m-1)/2)*log tau_b - (tau_b/2) * sum over edges (b_i - b_l)^2.
inline double icar_logpdf(std::span<const double> b, double tau_b, const AdjacencyGraph& g) {
    if (static_cast<int>(b.size()) != g.m())
        throw NumericalError("icar_logpdf: vector length does not match graph");
    if (!(tau_b > 0.0)) throw NumericalError("icar_logpdf: tau_b must be positive");
    double qf = 0.0;
    for (int i = 0; i < g.m(); ++i)
        for (int l : g.neighbors(i))
            if (i < l) {
                const double d = b[i] - b[l];
                qf += d * d;
            }
    return 0.5 * (g.m() - 1) * std::log(tau_b) - 0.5 * tau_b * qf;
}

/// Pairwise quadratic form sum over edges (b_i - b_l)^2; the ICAR precision's
/// Gibbs update consumes this with rank m-1.
inline double icar_quad_form(std::span<const double> b, const AdjacencyGraph& g) {
    double qf = 0.0;
    for (int i = 0; i < g.m(); ++i)
        for (int l : g.neighbors(i))
            if (i < l) {
                const double d = b[i] - b[l];
                qf += d * d;
            }
    return qf;
}

inline double normal_logpdf(double x, double mean, double prec) {
    const double r = x - mean;
    return 0.5 * (std::log(prec) - std::log(2.0 * std::numbers::pi)) - 0.5 * prec * r * r;
}

inline double gamma_logpdf(double x, double shape, double rate) {
    if (!(x > 0.0)) throw NumericalError("gamma_logpdf: non-positive argument");
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

inline void check_sum_to_zero(std::span<const double> b, const char* name) {
    double s = 0.0;
    for (double x : b) s += x;
    if (std::fabs(s) > 1e-9)
        throw NumericalError(std::string(name) + " violates the zero-sum ICAR constraint");
}

/// Joint log prior over all active parameter blocks for the given variant.
/// The graph may be null only when the variant needs none.
inline double log_prior(const ParamVector& p, const ModelSpec& spec, const AdjacencyGraph* g) {
    const PriorConfig& pc = spec.prior;
    for (double t : {p.tau0, p.tau1, p.tau2, p.tau_b, p.tau_v, p.tau_y})
        if (!(t > 0.0)) throw NumericalError("log_prior: non-positive precision");
    double lp = 0.0;
    if (spec.has_b0_scalar()) {
        lp += normal_logpdf(p.b0, 0.0, p.tau0);
        lp += gamma_logpdf(p.tau0, pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate);
    } else if (spec.has_b0_time()) {
        for (double b : p.b0_time) lp += normal_logpdf(b, 0.0, p.tau0);
        lp += gamma_logpdf(p.tau0, pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate);
    } else if (spec.has_b0_space()) {
        if (!g) throw NumericalError("log_prior: M5 requires an adjacency graph");
        check_sum_to_zero(p.b0_space, "b0_space");
        lp += icar_logpdf(p.b0_space, p.tau_b, *g);
        lp += gamma_logpdf(p.tau_b, pc.icar_prec_shape, pc.icar_prec_rate);
    }
    lp += normal_logpdf(p.b1, 0.0, p.tau1);
    lp += gamma_logpdf(p.tau1, pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate);
    if (spec.has_b2()) {
        lp += normal_logpdf(p.b2, 0.0, p.tau2);
        lp += gamma_logpdf(p.tau2, pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate);
    }
    if (spec.has_b_spatial()) {
        if (!g) throw NumericalError("log_prior: ICAR residual requires an adjacency graph");
        check_sum_to_zero(p.b_spatial, "b_spatial");
        lp += icar_logpdf(p.b_spatial, p.tau_b, *g);
        lp += gamma_logpdf(p.tau_b, pc.icar_prec_shape, pc.icar_prec_rate);
    }
    if (spec.has_v()) {
        for (double v : p.v_uncorr) lp += normal_logpdf(v, 0.0, p.tau_v);
        lp += gamma_logpdf(p.tau_v, pc.fixed_effect_prec_shape, pc.fixed_effect_prec_rate);
    }
    if (spec.data_model == DataModel::LogNormal)
        lp += gamma_logpdf(p.tau_y, pc.lognormal_obs_prec_shape, pc.lognormal_obs_prec_rate);
    return lp;
}

} // namespace stsir
