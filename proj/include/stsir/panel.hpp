#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "stsir/dates.hpp"
#include "stsir/errors.hpp"
#include "stsir/matrix.hpp"

namespace stsir {

/// County-by-day data panel. Regions are sorted lexicographically by id and
/// dates are consecutive calendar days, so all downstream indices and output
/// files are deterministic.
struct PanelData {
    std::vector<std::string> region_ids; // length m, sorted
    std::vector<Date> dates;             // length T, consecutive
    MatrixI sym;                         // m x T daily symptomatic counts
    MatrixI deaths;                      // m x T daily deaths
    std::vector<double> sus_init;        // length m, baseline susceptibles S_i1
    std::vector<double> poverty;         // length m, % under poverty line; empty if not loaded
    MatrixD smoothed;                    // m x T 3-day centered averages; empty unless computed

    int m() const { return static_cast<int>(region_ids.size()); }
    int T() const { return static_cast<int>(dates.size()); }

    void validate() const {
        const std::size_t mm = region_ids.size(), tt = dates.size();
        if (mm < 1) throw DataError("panel has no regions");
        if (tt < 2) throw DataError("panel needs at least 2 days");
        if (!std::is_sorted(region_ids.begin(), region_ids.end()))
            throw DataError("panel regions are not sorted");
        if (sym.rows() != mm || sym.cols() != tt || deaths.rows() != mm || deaths.cols() != tt)
            throw DataError("panel matrix dimensions do not match regions x days");
        for (std::size_t k = 1; k < tt; ++k)
            if (dates[k] - dates[k - 1] != 1) throw DataError("panel dates are not consecutive");
        if (sus_init.size() != mm) throw DataError("sus_init length does not match region count");
        for (long long v : sym.data())
            if (v < 0) throw DataError("negative symptomatic count");
        for (long long v : deaths.data())
            if (v < 0) throw DataError("negative death count");
        for (std::size_t i = 0; i < mm; ++i) {
            if (!(sus_init[i] > 0))
                throw DataError("non-positive susceptible baseline for region " + region_ids[i]);
            long long total = 0;
            for (std::size_t j = 0; j < tt; ++j) total += sym(i, j);
            if (!(sus_init[i] > static_cast<double>(total)))
                throw DataError("susceptible baseline for region " + region_ids[i] +
                                " does not exceed its total cases (" + std::to_string(total) + ")");
        }
        if (!poverty.empty() && poverty.size() != mm)
            throw DataError("poverty covariate length does not match region count");
        if (!smoothed.empty()) {
            if (smoothed.rows() != mm || smoothed.cols() != tt)
                throw DataError("smoothed matrix dimensions do not match panel");
            for (double v : smoothed.data())
                if (v < 0) throw DataError("negative smoothed count");
        }
    }
};

/// First differences of a cumulative series; downward revisions clamp to 0 so
/// the Poisson support stays valid. out[0] = in[0].
inline std::vector<long long> cumulative_to_daily(const std::vector<long long>& in) {
    if (in.empty()) throw DataError("cumulative_to_daily: empty series");
    std::vector<long long> out(in.size());
    out[0] = in[0];
    for (std::size_t j = 1; j < in.size(); ++j)
        out[j] = std::max<long long>(0, in[j] - in[j - 1]);
    return out;
}

/// 3-day centered moving average; endpoints use the mean of the available
/// 2-point window. T=1 returns the input.
inline std::vector<double> smooth_3day_centered(const std::vector<double>& in) {
    const std::size_t n = in.size();
    if (n == 0) throw DataError("smooth_3day_centered: empty series");
    if (n == 1) return in;
    std::vector<double> out(n);
    out[0] = (in[0] + in[1]) / 2.0;
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (in[j - 1] + in[j] + in[j + 1]) / 3.0;
    out[n - 1] = (in[n - 2] + in[n - 1]) / 2.0;
    return out;
}

/// Row-wise smoothing of a count matrix.
inline MatrixD smooth_3day_centered(const MatrixI& counts) {
    MatrixD out(counts.rows(), counts.cols());
    std::vector<double> row(counts.cols());
    for (std::size_t i = 0; i < counts.rows(); ++i) {
        for (std::size_t j = 0; j < counts.cols(); ++j) row[j] = static_cast<double>(counts(i, j));
        auto sm = smooth_3day_centered(row);
        for (std::size_t j = 0; j < counts.cols(); ++j) out(i, j) = sm[j];
    }
    return out;
}

} // namespace stsir
