#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stsir {

/// Deterministic random source. All variate generators are implemented here
/// because std:: distributions are implementation-defined and the trace
/// reproducibility contract requires bit-identical streams for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); never returns 0 so logs are safe.
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return u;
    }

    /// Standard normal via the Marsaglia polar method (second variate cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Gamma(shape, rate) via Marsaglia–Tsang; shape < 1 handled by boosting.
    double gamma(double shape, double rate) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0, 1.0);
            const double u = uniform_open();
            return g * std::pow(u, 1.0 / shape) / rate;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
        }
    }

    /// Poisson draw; Knuth product for small means, Hörmann's PTRS otherwise.
    long long poisson(double mu) {
        if (mu <= 0.0) return 0;
        if (mu < 30.0) {
            const double limit = std::exp(-mu);
            double prod = 1.0;
            long long k = -1;
            do {
                prod *= uniform_open();
                ++k;
            } while (prod > limit);
            return k;
        }
        // Transformed rejection with squeeze (Hörmann 1993).
        const double b = 0.931 + 2.53 * std::sqrt(mu);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mu = std::log(mu);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform_open();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
            if (kf < 0.0) continue;
            if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
            if (us < 0.013 && v > us) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * log_mu - mu - std::lgamma(kf + 1.0))
                return static_cast<long long>(kf);
        }
    }

    /// Binomial via geometric waiting times; exact for any n, O(n*p) expected.
    long long binomial(long long n, double p) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);
        const double log_q = std::log1p(-p);
        long long count = 0, pos = 0;
        for (;;) {
            const double u = uniform_open();
            pos += static_cast<long long>(std::floor(std::log(u) / log_q)) + 1;
            if (pos > n) break;
            ++count;
        }
        return count;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// 64-bit FNV-1a, used to hash specs/panels and derive per-region streams.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
        h ^= p[k];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    return fnv1a(s.data(), s.size(), h);
}

} // namespace stsir
