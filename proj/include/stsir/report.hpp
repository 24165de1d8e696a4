#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "stsir/config.hpp"
#include "stsir/csv.hpp"
#include "stsir/mcmc.hpp"
#include "stsir/metrics.hpp"
#include "stsir/panel.hpp"

namespace stsir {

/// Content hash of the model spec, stored in trace headers so predict/compare
/// can reject mismatched trace/config pairs.
inline std::string spec_hash(const ModelSpec& spec) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(model_spec_to_json(spec).dump())));
    return buf;
}

/// Content hash of the panel (regions, dates, counts, baselines, covariate).
inline std::string panel_hash(const PanelData& panel) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& id : panel.region_ids) h = fnv1a(id, h);
    for (const Date& d : panel.dates) {
        const std::int64_t v = d.days();
        h = fnv1a(&v, sizeof(v), h);
    }
    h = fnv1a(panel.sym.data().data(), panel.sym.data().size() * sizeof(long long), h);
    h = fnv1a(panel.deaths.data().data(), panel.deaths.data().size() * sizeof(long long), h);
    h = fnv1a(panel.sus_init.data(), panel.sus_init.size() * sizeof(double), h);
    if (!panel.poverty.empty())
        h = fnv1a(panel.poverty.data(), panel.poverty.size() * sizeof(double), h);
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Writes the canonical trace CSV: '#'-prefixed metadata lines, then a header
/// row of parameter names plus `deviance`, one row per retained draw.
inline void write_trace_csv(const std::string& path, const ChainTrace& trace,
                            const ModelSpec& spec,
                            const std::map<std::string, std::string>& meta) {
    std::string out;
    for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
    for (std::size_t c = 0; c < trace.param_names.size(); ++c)
        out += trace.param_names[c] + ",";
    out += "deviance\n";
    for (std::size_t s = 0; s < trace.draws.size(); ++s) {
        const auto row = flatten_params(trace.draws[s], spec);
        for (double v : row) out += csv::format_double(v) + ",";
        out += csv::format_double(trace.deviances[s]) + "\n";
    }
    csv::atomic_write(path, out);
}

/// Trace file contents: column names, draws as flat rows, deviances, metadata.
struct TraceFile {
    std::vector<std::string> param_names; // excludes the deviance column
    std::vector<std::vector<double>> rows;
    std::vector<double> deviances;
    std::map<std::string, std::string> meta;
};

inline TraceFile read_trace_csv(const std::string& path) {
    csv::Reader in(path);
    TraceFile tf;
    for (const auto& [k, v] : in.meta()) tf.meta[k] = v;
    const auto& header = in.header();
    if (header.empty() || header.back() != "deviance")
        throw DataError(path + ": trace file must end with a deviance column");
    tf.param_names.assign(header.begin(), header.end() - 1);
    for (const auto& row : in.rows()) {
        if (row.fields.size() != header.size())
            throw DataError(path + ":" + std::to_string(row.line_no) + ": wrong column count");
        std::vector<double> vals(tf.param_names.size());
        for (std::size_t c = 0; c < vals.size(); ++c)
            vals[c] = csv::parse_real(row.fields[c], path, row.line_no);
        tf.rows.push_back(std::move(vals));
        tf.deviances.push_back(csv::parse_real(row.fields.back(), path, row.line_no));
    }
    return tf;
}

/// Posterior mean, sd, and the equal-tailed 95% interval per parameter.
struct ParamSummary {
    std::string name;
    double mean = 0.0, sd = 0.0, q025 = 0.0, q975 = 0.0;
};

inline std::vector<ParamSummary> summarize_trace(const ChainTrace& trace, const ModelSpec& spec) {
    std::vector<ParamSummary> out;
    if (trace.draws.empty()) return out;
    const std::size_t ncol = trace.param_names.size();
    std::vector<std::vector<double>> cols(ncol, std::vector<double>(trace.draws.size()));
    for (std::size_t s = 0; s < trace.draws.size(); ++s) {
        const auto row = flatten_params(trace.draws[s], spec);
        for (std::size_t c = 0; c < ncol; ++c) cols[c][s] = row[c];
    }
    for (std::size_t c = 0; c < ncol; ++c) {
        ParamSummary ps;
        ps.name = trace.param_names[c];
        ps.mean = mean_of(cols[c]);
        ps.sd = cols[c].size() > 1 ? std::sqrt(variance_of(cols[c])) : 0.0;
        std::sort(cols[c].begin(), cols[c].end());
        ps.q025 = quantile_sorted(cols[c], 0.025);
        ps.q975 = quantile_sorted(cols[c], 0.975);
        out.push_back(ps);
    }
    return out;
}

inline void write_summary_csv(const std::string& path, const std::vector<ParamSummary>& summary) {
    std::string out = "parameter,mean,sd,q2.5,q97.5\n";
    for (const auto& s : summary)
        out += s.name + "," + csv::format_double(s.mean) + "," + csv::format_double(s.sd) + "," +
               csv::format_double(s.q025) + "," + csv::format_double(s.q975) + "\n";
    csv::atomic_write(path, out);
}

inline void write_dic_csv(const std::string& path, const std::string& model_label,
                          const DicResult& d) {
    std::string out = "model,dic,pd,mean_deviance\n";
    out += model_label + "," + csv::format_double(d.dic) + "," + csv::format_double(d.p_d) + "," +
           csv::format_double(d.mean_deviance) + "\n";
    csv::atomic_write(path, out);
}

struct CompareRow {
    std::string model;
    DicResult dic;
};

/// Model-comparison table, ascending by DIC.
inline void write_compare_csv(const std::string& path, std::vector<CompareRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const CompareRow& a, const CompareRow& b) { return a.dic.dic < b.dic.dic; });
    std::string out = "model,dic,pd,mean_deviance\n";
    for (const auto& r : rows)
        out += r.model + "," + csv::format_double(r.dic.dic) + "," + csv::format_double(r.dic.p_d) +
               "," + csv::format_double(r.dic.mean_deviance) + "\n";
    csv::atomic_write(path, out);
}

struct GewekeRow {
    int chain = 1;
    std::string parameter;
    GewekeResult result;
};

inline void write_geweke_csv(const std::string& path, const std::vector<GewekeRow>& rows) {
    std::string out = "chain,parameter,z,degenerate\n";
    for (const auto& r : rows)
        out += std::to_string(r.chain) + "," + r.parameter + "," + csv::format_double(r.result.z) +
               "," + (r.result.degenerate ? "1" : "0") + "\n";
    csv::atomic_write(path, out);
}

inline void write_forecast_csv(const std::string& path, const std::vector<ForecastResult>& fc) {
    std::string out = "fips,pred_mean,lower95,upper95,n_draws\n";
    for (const auto& r : fc)
        out += r.region_id + "," + csv::format_double(r.pred_mean) + "," +
               csv::format_double(r.lower95) + "," + csv::format_double(r.upper95) + "," +
               std::to_string(r.n_draws) + "\n";
    csv::atomic_write(path, out);
}

/// Long-format (fips, date, value) dump of an m x T surface.
inline void write_surface_csv(const std::string& path, const PanelData& panel, const MatrixD& surf,
                              const std::string& value_name) {
    std::string out = "fips,date," + value_name + "\n";
    for (int i = 0; i < panel.m(); ++i)
        for (int j = 0; j < panel.T(); ++j)
            out += panel.region_ids[i] + "," + panel.dates[j].to_string() + "," +
                   csv::format_double(surf(i, j)) + "\n";
    csv::atomic_write(path, out);
}

/// Per-region fitted-mean profile: observed counts with the posterior mean
/// and 95% band of mu over time.
inline void write_fitted_profile_csv(const std::string& path, const PanelData& panel, int i,
                                     const std::vector<MatrixD>& mu_snapshots,
                                     const MatrixD& observed) {
    std::string out = "date,observed,mu_mean,mu_q2.5,mu_q97.5\n";
    const std::size_t n = mu_snapshots.size();
    std::vector<double> cell(n);
    for (int j = 0; j < panel.T(); ++j) {
        for (std::size_t s = 0; s < n; ++s) cell[s] = mu_snapshots[s](i, j);
        const double mean = mean_of(cell);
        std::sort(cell.begin(), cell.end());
        out += panel.dates[j].to_string() + "," + csv::format_double(observed(i, j)) + "," +
               csv::format_double(mean) + "," + csv::format_double(quantile_sorted(cell, 0.025)) +
               "," + csv::format_double(quantile_sorted(cell, 0.975)) + "\n";
    }
    csv::atomic_write(path, out);
}

} // namespace stsir
