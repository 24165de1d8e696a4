#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "stsir/errors.hpp"
#include "stsir/matrix.hpp"

namespace stsir {

/// DIC with the conservative effective-parameter count pD = var(D)/2.
struct DicResult {
    double dic = 0.0;
    double p_d = 0.0;
    double mean_deviance = 0.0;
};

inline double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

/// Sample variance, divisor n-1.
inline double variance_of(std::span<const double> x) {
    const double mu = mean_of(x);
    double s = 0.0;
    for (double v : x) s += (v - mu) * (v - mu);
    return s / static_cast<double>(x.size() - 1);
}

inline DicResult dic(std::span<const double> deviances) {
    if (deviances.size() < 2) throw NumericalError("dic requires at least 2 deviance draws");
    for (double d : deviances)
        if (!std::isfinite(d)) throw NumericalError("dic: non-finite deviance draw");
    DicResult out;
    out.mean_deviance = mean_of(deviances);
    out.p_d = 0.5 * variance_of(deviances);
    out.dic = out.mean_deviance + out.p_d;
    return out;
}

/// Spectral-density-at-zero surrogate: batch-means variance with
/// floor(sqrt(n)) non-overlapping batches. Returns an estimate of the
/// per-sample variance accounting for autocorrelation.
inline double batch_means_variance(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return n >= 2 ? variance_of(x) : 0.0;
    const std::size_t nb = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const std::size_t bs = n / nb;
    std::vector<double> bm(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t < bs; ++t) s += x[k * bs + t];
        bm[k] = s / static_cast<double>(bs);
    }
    return static_cast<double>(bs) * variance_of(bm);
}

struct GewekeResult {
    double z = 0.0;
    bool degenerate = false; // no variation in either window
};

/// Geweke convergence z-score: compares the mean of the first frac_a of the
/// trace against the last frac_b, with batch-means variance estimates.
inline GewekeResult geweke_z(std::span<const double> trace, double frac_a = 0.1,
                             double frac_b = 0.5) {
    if (trace.size() < 100) throw NumericalError("geweke_z requires a trace of length >= 100");
    if (!(frac_a > 0.0 && frac_a < 1.0 && frac_b > 0.0 && frac_b < 1.0))
        throw ConfigError("geweke_z: window fractions must lie in (0,1)");
    if (frac_a + frac_b > 1.0) throw ConfigError("geweke_z: windows overlap");
    const std::size_t n = trace.size();
    const std::size_t na = static_cast<std::size_t>(std::floor(frac_a * static_cast<double>(n)));
    const std::size_t nbw = static_cast<std::size_t>(std::floor(frac_b * static_cast<double>(n)));
    std::span<const double> a = trace.subspan(0, na);
    std::span<const double> b = trace.subspan(n - nbw, nbw);
    const double va = batch_means_variance(a);
    const double vb = batch_means_variance(b);
    const double denom = va / static_cast<double>(na) + vb / static_cast<double>(nbw);
    GewekeResult out;
    if (denom <= 0.0) {
        out.degenerate = true;
        out.z = 0.0;
        return out;
    }
    out.z = (mean_of(a) - mean_of(b)) / std::sqrt(denom);
    return out;
}

/// Per-cell mean squared error of the fitted mean against observed counts,
/// averaged over retained draws.
inline MatrixD mse_profile(const std::vector<MatrixD>& mu_snapshots, const MatrixD& observed) {
    if (mu_snapshots.size() < 2) throw NumericalError("mse_profile needs at least 2 snapshots");
    MatrixD out(observed.rows(), observed.cols(), 0.0);
    for (const auto& mu : mu_snapshots) {
        if (mu.rows() != observed.rows() || mu.cols() != observed.cols())
            throw NumericalError("mse_profile: snapshot dimensions mismatch");
        for (std::size_t k = 0; k < out.data().size(); ++k) {
            const double d = mu.data()[k] - observed.data()[k];
            out.data()[k] += d * d;
        }
    }
    for (double& v : out.data()) v /= static_cast<double>(mu_snapshots.size());
    return out;
}

/// Per-cell mean squared predictive error of posterior replicate draws
/// against observed counts (the Gelfand–Ghosh loss surface).
inline MatrixD mspe_profile(const std::vector<MatrixD>& replicates, const MatrixD& observed) {
    if (replicates.empty()) throw NumericalError("mspe_profile needs at least 1 replicate");
    MatrixD out(observed.rows(), observed.cols(), 0.0);
    for (const auto& rep : replicates) {
        if (rep.rows() != observed.rows() || rep.cols() != observed.cols())
            throw NumericalError("mspe_profile: replicate dimensions mismatch");
        for (std::size_t k = 0; k < out.data().size(); ++k) {
            const double d = rep.data()[k] - observed.data()[k];
            out.data()[k] += d * d;
        }
    }
    for (double& v : out.data()) v /= static_cast<double>(replicates.size());
    return out;
}

} // namespace stsir
