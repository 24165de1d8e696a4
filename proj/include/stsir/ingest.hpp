#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "stsir/adjacency.hpp"
#include "stsir/csv.hpp"
#include "stsir/dates.hpp"
#include "stsir/panel.hpp"

namespace stsir {

/// Loads an NYT-layout cumulative case file plus population and covariate
/// files into a daily-incidence panel over [start, end] inclusive.
///
/// Regions are keyed by fips and sorted lexicographically. Days with no row
/// carry the last seen cumulative value forward (zero before a region's first
/// row), and the cumulative value on the day before `start` (when rows exist
/// there) anchors the first day's increment so a mid-epidemic window does not
/// absorb the whole prior history. Downward revisions clamp to zero daily
/// counts. covariate_path may be empty for variants without the covariate.
inline PanelData load_panel(const std::string& cases_path, const std::string& population_path,
                            const std::string& covariate_path, Date start, Date end) {
    if (end < start) throw DataError("empty date range: end precedes start");
    const int T = static_cast<int>(end - start) + 1;
    if (T < 2) throw DataError("date range must span at least 2 days");

    csv::Reader cases(cases_path);
    const int c_date = cases.require_column("date");
    const int c_fips = cases.require_column("fips");
    const int c_cases = cases.require_column("cases");
    const int c_deaths = cases.require_column("deaths");

    // per region: date -> (cumulative cases, cumulative deaths)
    std::map<std::string, std::map<std::int64_t, std::pair<long long, long long>>> series;
    for (const auto& row : cases.rows()) {
        if (static_cast<int>(row.fields.size()) <=
            std::max({c_date, c_fips, c_cases, c_deaths}))
            throw DataError(cases_path + ":" + std::to_string(row.line_no) + ": short row");
        Date d;
        try {
            d = Date::parse(row.fields[c_date]);
        } catch (const DataError& e) {
            throw DataError(cases_path + ":" + std::to_string(row.line_no) + ": " + e.what());
        }
        const std::string& fips = row.fields[c_fips];
        if (fips.empty())
            throw DataError(cases_path + ":" + std::to_string(row.line_no) + ": empty fips");
        const long long cc = csv::parse_count(row.fields[c_cases], cases_path, row.line_no);
        const long long cd = csv::parse_count(row.fields[c_deaths], cases_path, row.line_no);
        series[fips][d.days()] = {cc, cd};
    }
    if (series.empty()) throw DataError(cases_path + ": no case rows");

    PanelData panel;
    for (const auto& [fips, _] : series) panel.region_ids.push_back(fips);
    const int m = static_cast<int>(panel.region_ids.size());
    panel.dates.resize(T);
    for (int j = 0; j < T; ++j) panel.dates[j] = start + j;
    panel.sym = MatrixI(m, T);
    panel.deaths = MatrixI(m, T);

    for (int i = 0; i < m; ++i) {
        const auto& obs = series[panel.region_ids[i]];
        long long cum_c = 0, cum_d = 0;
        // carry-forward baseline through the day before the window
        for (const auto& [day, v] : obs) {
            if (day >= start.days()) break;
            cum_c = v.first;
            cum_d = v.second;
        }
        for (int j = 0; j < T; ++j) {
            const auto it = obs.find((start + j).days());
            long long c = cum_c, d = cum_d;
            if (it != obs.end()) {
                c = it->second.first;
                d = it->second.second;
            }
            panel.sym(i, j) = std::max<long long>(0, c - cum_c);
            panel.deaths(i, j) = std::max<long long>(0, d - cum_d);
            cum_c = c;
            cum_d = d;
        }
    }

    csv::Reader pop(population_path);
    const int p_fips = pop.require_column("fips");
    const int p_pop = pop.require_column("population");
    std::map<std::string, double> popmap;
    for (const auto& row : pop.rows()) {
        if (static_cast<int>(row.fields.size()) <= std::max(p_fips, p_pop))
            throw DataError(population_path + ":" + std::to_string(row.line_no) + ": short row");
        popmap[row.fields[p_fips]] = csv::parse_real(row.fields[p_pop], population_path, row.line_no);
    }
    panel.sus_init.resize(m);
    for (int i = 0; i < m; ++i) {
        auto it = popmap.find(panel.region_ids[i]);
        if (it == popmap.end())
            throw DataError(population_path + ": missing region " + panel.region_ids[i]);
        panel.sus_init[i] = it->second;
    }

    if (!covariate_path.empty()) {
        csv::Reader cov(covariate_path);
        const int v_fips = cov.require_column("fips");
        const int v_val = cov.require_column("pct_poverty");
        std::map<std::string, double> covmap;
        for (const auto& row : cov.rows()) {
            if (static_cast<int>(row.fields.size()) <= std::max(v_fips, v_val))
                throw DataError(covariate_path + ":" + std::to_string(row.line_no) + ": short row");
            covmap[row.fields[v_fips]] = csv::parse_real(row.fields[v_val], covariate_path, row.line_no);
        }
        panel.poverty.resize(m);
        for (int i = 0; i < m; ++i) {
            auto it = covmap.find(panel.region_ids[i]);
            if (it == covmap.end())
                throw DataError(covariate_path + ": missing region " + panel.region_ids[i]);
            panel.poverty[i] = it->second;
        }
    }

    panel.validate();
    return panel;
}

/// Loads an undirected edge list (`fips_a,fips_b`) over the given region
/// ordering. Unknown regions and self-loops are errors; single-listed edges
/// are symmetrized.
inline AdjacencyGraph load_adjacency(const std::string& path,
                                     const std::vector<std::string>& region_ids) {
    csv::Reader in(path);
    const int c_a = in.require_column("fips_a");
    const int c_b = in.require_column("fips_b");
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < region_ids.size(); ++i)
        index[region_ids[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edges;
    for (const auto& row : in.rows()) {
        if (static_cast<int>(row.fields.size()) <= std::max(c_a, c_b))
            throw DataError(path + ":" + std::to_string(row.line_no) + ": short row");
        auto ia = index.find(row.fields[c_a]);
        auto ib = index.find(row.fields[c_b]);
        if (ia == index.end())
            throw DataError(path + ":" + std::to_string(row.line_no) + ": unknown region " +
                            row.fields[c_a]);
        if (ib == index.end())
            throw DataError(path + ":" + std::to_string(row.line_no) + ": unknown region " +
                            row.fields[c_b]);
        if (ia->second == ib->second)
            throw DataError(path + ":" + std::to_string(row.line_no) + ": self-loop at region " +
                            row.fields[c_a]);
        edges.emplace_back(ia->second, ib->second);
    }
    return AdjacencyGraph::from_edges(static_cast<int>(region_ids.size()), edges);
}

/// Writes a panel back to the NYT cumulative layout plus the side files; the
/// exact inverse of load_panel for integer fields. Used by the simulator so
/// fits exercise the full ingest path.
inline void write_panel_files(const PanelData& panel, const std::string& cases_path,
                              const std::string& population_path,
                              const std::string& covariate_path) {
    std::string cases = "date,county,state,fips,cases,deaths\n";
    const int m = panel.m(), T = panel.T();
    for (int i = 0; i < m; ++i) {
        long long cum_c = 0, cum_d = 0;
        for (int j = 0; j < T; ++j) {
            cum_c += panel.sym(i, j);
            cum_d += panel.deaths(i, j);
            cases += panel.dates[j].to_string() + ",Region" + panel.region_ids[i] + ",Synthetic," +
                     panel.region_ids[i] + "," + std::to_string(cum_c) + "," +
                     std::to_string(cum_d) + "\n";
        }
    }
    csv::atomic_write(cases_path, cases);

    std::string pop = "fips,population\n";
    for (int i = 0; i < m; ++i)
        pop += panel.region_ids[i] + "," + csv::format_double(panel.sus_init[i]) + "\n";
    csv::atomic_write(population_path, pop);

    if (!covariate_path.empty() && !panel.poverty.empty()) {
        std::string cov = "fips,pct_poverty\n";
        for (int i = 0; i < m; ++i)
            cov += panel.region_ids[i] + "," + csv::format_double(panel.poverty[i]) + "\n";
        csv::atomic_write(covariate_path, cov);
    }
}

inline void write_adjacency_file(const AdjacencyGraph& g,
                                 const std::vector<std::string>& region_ids,
                                 const std::string& path) {
    std::string out = "fips_a,fips_b\n";
    for (int i = 0; i < g.m(); ++i)
        for (int l : g.neighbors(i))
            if (i < l) out += region_ids[i] + "," + region_ids[l] + "\n";
    csv::atomic_write(path, out);
}

} // namespace stsir
