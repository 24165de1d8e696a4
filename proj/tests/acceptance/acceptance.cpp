// Acceptance suite: runs each end-to-end criterion at its stated tolerance
// and prints one pass/fail line per criterion. Every statistical criterion
// runs with a fixed seed so the suite is deterministic.
//
// Usage: acceptance [--criterion N] [--cli PATH]
//   --criterion N  run a single criterion (default: all)
//   --cli PATH     stsir CLI binary, required by criterion 9

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stsir/csv.hpp"
#include "stsir/forecast.hpp"
#include "stsir/ingest.hpp"
#include "stsir/likelihood.hpp"
#include "stsir/mcmc.hpp"
#include "stsir/metrics.hpp"
#include "stsir/report.hpp"

namespace fs = std::filesystem;
using namespace stsir;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PanelData blank_panel(int m, int T, double sus0) {
    PanelData p;
    for (int i = 0; i < m; ++i) p.region_ids.push_back("R" + std::to_string(i));
    p.dates.resize(T);
    for (int j = 0; j < T; ++j) p.dates[j] = Date::parse("2020-03-01") + j;
    p.sym = MatrixI(m, T, 0);
    p.deaths = MatrixI(m, T, 0);
    p.sus_init.assign(m, sus0);
    return p;
}

// ---------------------------------------------------------------------------
// criterion 1: deviance oracle, 100 random small panels, 1e-9 relative, < 5 s

double oracle_pois_loglik(long long y, double mu) {
    double log_fact = 0.0;
    for (long long k = 2; k <= y; ++k) log_fact += std::log(static_cast<double>(k));
    return static_cast<double>(y) * std::log(mu) - mu - log_fact;
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 1 + static_cast<int>(rng.uniform() * 5);
        const int T = 2 + static_cast<int>(rng.uniform() * 9);
        auto p = blank_panel(m, T, 1e6);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < T; ++j) p.sym(i, j) = static_cast<long long>(rng.uniform() * 51);
        ModelSpec spec;
        spec.variant = Variant::M1;
        spec.include_icar = false;
        LatentState st = accounting_forward(p, spec);
        st.mu = MatrixD(m, T);
        for (auto& v : st.mu.data()) v = 0.01 + rng.uniform() * 60;
        spec.offset = 1e-300; // offset 0 up to the validate() positivity guard
        double oracle = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < T; ++j)
                oracle += -2.0 * oracle_pois_loglik(p.sym(i, j), st.mu(i, j));
        const double dev = total_deviance(p, st, spec);
        worst = std::max(worst, std::fabs(dev - oracle) / std::fabs(oracle));
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "worst relative error " << worst << ", " << secs << " s";
    return {worst < 1e-9 && secs < 5.0, os.str()};
}

// ---------------------------------------------------------------------------
// criterion 2: ICAR hand value on the path graph + permutation invariance

Outcome criterion2() {
    auto path3 = AdjacencyGraph::path(3);
    const std::vector<double> b{1.0, 0.0, -1.0};
    const double got = icar_logpdf(b, 2.0, path3);
    const double want = std::log(2.0) - 2.0;
    if (std::fabs(got - want) > 1e-12)
        return {false, "path value " + std::to_string(got) + " != log2-2"};

    Rng rng(47);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 3 + static_cast<int>(rng.uniform() * 6); // m <= 8
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i + 1 < m; ++i) edges.emplace_back(i, i + 1);
        for (int k = 0; k < m; ++k) {
            const int a = static_cast<int>(rng.uniform() * m);
            const int c = static_cast<int>(rng.uniform() * m);
            if (a != c) edges.emplace_back(a, c);
        }
        auto g = AdjacencyGraph::from_edges(m, edges);
        std::vector<double> v(m);
        double mean = 0;
        for (auto& x : v) {
            x = rng.normal();
            mean += x / m;
        }
        for (auto& x : v) x -= mean;
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i) perm[i] = i;
        for (int i = m - 1; i > 0; --i)
            std::swap(perm[i], perm[static_cast<int>(rng.uniform() * (i + 1))]);
        auto gp = g.permuted(perm);
        std::vector<double> vp(m);
        for (int i = 0; i < m; ++i) vp[perm[i]] = v[i];
        const double tau = 0.5 + rng.uniform() * 4;
        worst = std::max(worst, std::fabs(icar_logpdf(vp, tau, gp) - icar_logpdf(v, tau, g)));
    }
    std::ostringstream os;
    os << "path value exact, permutation gap " << worst;
    return {worst < 1e-10, os.str()};
}

// ---------------------------------------------------------------------------
// criterion 3: conjugate Gibbs calibration, 10k draws vs analytic posterior

Outcome criterion3() {
    struct Case {
        double prior_shape, prior_rate, qf;
        long rank;
    };
    const Case cases[] = {{2.0, 0.5, 0.0, 1},  // zero scalar -> gamma(2.5, 0.5)
                          {2.0, 0.5, 4.0, 1},  // b = 2 -> gamma(2.5, 2.5)
                          {0.01, 0.01, 2.0, 2}}; // ICAR path b=[1,0,-1] -> gamma(1.01, 1.01)
    Rng rng(321);
    const int n = 10000;
    std::ostringstream os;
    bool ok = true;
    for (const auto& c : cases) {
        const double shape = c.prior_shape + 0.5 * c.rank;
        const double rate = c.prior_rate + 0.5 * c.qf;
        const double mean = shape / rate, var = shape / (rate * rate);
        std::vector<double> d(n);
        for (int k = 0; k < n; ++k)
            d[k] = gibbs_precision(c.prior_shape, c.prior_rate, c.qf, c.rank, rng);
        const double mhat = mean_of(d);
        const double vhat = variance_of(d);
        const double se_mean = std::sqrt(var / n);
        const double se_var = var * std::sqrt(2.0 / (n - 1) + 6.0 / (shape * n));
        const double zm = std::fabs(mhat - mean) / se_mean;
        const double zv = std::fabs(vhat - var) / se_var;
        ok = ok && zm < 3.0 && zv < 3.0;
        os << "gamma(" << shape << "," << rate << ") zm=" << zm << " zv=" << zv << "; ";
    }
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// criteria 4 and 10: MCMC marginal vs dense-grid posterior in total variation

double tv_binned(const std::vector<double>& draws, const std::vector<double>& grid_x,
                 const std::vector<double>& grid_logp, int nbins, double lo, double hi) {
    double mx = -1e300;
    for (double v : grid_logp) mx = std::max(mx, v);
    double tot = 0;
    std::vector<double> gp(grid_logp.size());
    for (std::size_t k = 0; k < gp.size(); ++k) {
        gp[k] = std::exp(grid_logp[k] - mx);
        tot += gp[k];
    }
    std::vector<double> pg(nbins + 2, 0.0), pm(nbins + 2, 0.0);
    const double w = (hi - lo) / nbins;
    auto bin_of = [&](double x) {
        if (x < lo) return 0;
        if (x >= hi) return nbins + 1;
        return 1 + static_cast<int>((x - lo) / w);
    };
    for (std::size_t k = 0; k < gp.size(); ++k) pg[bin_of(grid_x[k])] += gp[k] / tot;
    for (double d : draws) pm[bin_of(d)] += 1.0 / static_cast<double>(draws.size());
    double tv = 0;
    for (int k = 0; k < nbins + 2; ++k) tv += std::fabs(pg[k] - pm[k]);
    return 0.5 * tv;
}

/// Grid-vs-chain TV for a single free b0 with everything else frozen.
double grid_equivalence_tv(const PanelData& panel, const ModelSpec& spec,
                           const ParamVector& init, std::uint64_t seed) {
    ModelWorkspace ws(panel, spec, nullptr);
    const int G = 4000;
    std::vector<double> gx(G), glp(G);
    ParamVector p = init;
    for (int k = 0; k < G; ++k) {
        gx[k] = -14.0 + 14.0 * k / (G - 1.0);
        p.b0 = gx[k];
        glp[k] = ws.loglik_all(p) + normal_logpdf(p.b0, 0.0, init.tau0);
    }
    double mx = -1e300;
    for (double v : glp) mx = std::max(mx, v);
    double s0 = 0, s1 = 0, s2 = 0;
    for (int k = 0; k < G; ++k) {
        const double w = std::exp(glp[k] - mx);
        s0 += w;
        s1 += w * gx[k];
        s2 += w * gx[k] * gx[k];
    }
    const double mean = s1 / s0;
    const double sd = std::sqrt(s2 / s0 - mean * mean);

    SamplerConfig cfg;
    cfg.n_iter = 55000;
    cfg.burn_in = 5000;
    cfg.thin = 1; // 50k retained draws
    cfg.seed = seed;
    cfg.store_mu = false;
    cfg.frozen = {"b1", "tau0", "tau1", "tau_y"};
    auto trace = run_chain(panel, spec, nullptr, cfg, &init);
    std::vector<double> draws;
    draws.reserve(trace.draws.size());
    for (const auto& d : trace.draws) draws.push_back(d.b0);
    return tv_binned(draws, gx, glp, 20, mean - 5 * sd, mean + 5 * sd);
}

Outcome criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    auto panel = blank_panel(2, 3, 1000.0);
    panel.sus_init = {1000.0, 1200.0};
    const long long y[2][3] = {{3, 5, 4}, {2, 4, 6}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) panel.sym(i, j) = y[i][j];
    ModelSpec spec;
    spec.variant = Variant::M1;
    spec.include_icar = false;
    ParamVector init = initialize(spec, 2, 3);
    init.b1 = 0.3;
    const double tv = grid_equivalence_tv(panel, spec, init, 2020);
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "TV " << tv << " at 50k draws, " << secs << " s";
    return {tv < 0.05 && secs < 120.0, os.str()};
}

// ---------------------------------------------------------------------------
// criteria 5-7 share the stated M3 scenario: m=10 ring, sus_init=1e5,
// b0=-9.5, b1=0.8, b2=0.5, tau_b=4, phi=0.25. The covariate is a centered
// alternating index; see the project README for why that keeps day-61 counts
// alive.

SimScenario recovery_scenario(std::uint64_t seed, int T) {
    SimScenario sc;
    sc.m = 10;
    sc.T = T;
    sc.seed = seed;
    sc.spec.variant = Variant::M3;
    sc.spec.phi = 0.25;
    sc.graph = AdjacencyGraph::ring(10);
    sc.sus_init.assign(10, 1e5);
    sc.poverty.resize(10);
    for (int i = 0; i < 10; ++i) sc.poverty[i] = -3.0 + 0.6 * ((i % 2 == 0) ? 1.0 : -1.0);
    sc.true_params.b0 = -9.5;
    sc.true_params.b1 = 0.8;
    sc.true_params.b2 = 0.5;
    sc.true_params.tau_b = 4.0;
    Rng r(seed ^ 0x5151u);
    sc.true_params.b_spatial = sample_icar(sc.graph, 4.0, r);
    return sc;
}

Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    auto sc = recovery_scenario(1, 60);
    auto panel = simulate_panel(sc);
    SamplerConfig cfg; // spec defaults: 60000 / 20000 / 10
    cfg.seed = 9001;
    cfg.store_mu = false;
    auto trace = run_chain(panel, sc.spec, &sc.graph, cfg);
    auto summ = summarize_trace(trace, sc.spec);
    const double truth[] = {-9.5, 0.8, 0.5};
    const char* names[] = {"b0", "b1", "b2"};
    std::ostringstream os;
    bool ok = true;
    for (const auto& s : summ)
        for (int k = 0; k < 3; ++k)
            if (s.name == names[k]) {
                const double z = std::fabs(s.mean - truth[k]) / s.sd;
                ok = ok && z < 3.0;
                os << names[k] << " z=" << z << " ";
            }
    const double secs = seconds_since(t0);
    os << secs << " s";
    return {ok && secs < 600.0, os.str()};
}

Outcome criterion6() {
    int wins = 0;
    std::ostringstream os;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto sc = recovery_scenario(seed, 60);
        auto panel = simulate_panel(sc);
        SamplerConfig cfg;
        cfg.seed = 9000 + seed;
        cfg.store_mu = false;
        auto tr3 = run_chain(panel, sc.spec, &sc.graph, cfg);
        ModelSpec m1 = sc.spec;
        m1.variant = Variant::M1;
        auto tr1 = run_chain(panel, m1, &sc.graph, cfg);
        wins += dic(tr3.deviances).dic < dic(tr1.deviances).dic;
    }
    os << "DIC(M3) < DIC(M1) in " << wins << "/10 seeds";
    return {wins >= 8, os.str()};
}

Outcome criterion7() {
    int covered = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto sc = recovery_scenario(seed, 61);
        auto full = simulate_panel(sc);
        PanelData train = full;
        train.dates.resize(60);
        train.sym = MatrixI(10, 60);
        train.deaths = MatrixI(10, 60);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 60; ++j) {
                train.sym(i, j) = full.sym(i, j);
                train.deaths(i, j) = full.deaths(i, j);
            }
        SamplerConfig cfg;
        cfg.seed = 7000 + seed;
        cfg.store_mu = false;
        auto trace = run_chain(train, sc.spec, &sc.graph, cfg);
        auto fc = one_step_forecast(trace, train, sc.spec, &sc.graph, 100 + seed);
        for (int i = 0; i < 10; ++i) {
            const double truth = static_cast<double>(full.sym(i, 60));
            covered += (truth >= fc[i].lower95 && truth <= fc[i].upper95);
            ++total;
        }
    }
    std::ostringstream os;
    os << "covered " << covered << "/" << total;
    return {covered >= 170 && covered <= 198, os.str()}; // 85-99% of 200
}

// ---------------------------------------------------------------------------
// criterion 8: Geweke calibration on white noise

Outcome criterion8() {
    Rng rng(424242);
    int inside = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> tr(10000);
        for (auto& v : tr) v = rng.normal();
        inside += std::fabs(geweke_z(tr).z) < 3.0;
    }
    std::ostringstream os;
    os << inside << "/100 traces with |z| < 3";
    return {inside >= 99, os.str()};
}

// ---------------------------------------------------------------------------
// criterion 9: full CLI pipeline round trip, bit-identical on rerun

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion9(const std::string& cli) {
    if (cli.empty()) return {false, "no --cli path given"};
    const fs::path root = fs::temp_directory_path() / "stsir_acceptance_c9";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root);

    const std::string scenario = R"({
  "m": 4, "T": 30, "seed": 404, "start_date": "2020-03-01",
  "model": {"variant": 3, "phi": 0.25, "beta_rc": 0.1},
  "graph": "ring",
  "sus_init": 10000.0,
  "poverty": [1.0, 0.2, 1.0, 0.2],
  "true_params": {"b0": -9.0, "b1": 0.8, "b2": 0.5, "tau_b": 25.0, "b_spatial": "icar"}
})";
    csv::atomic_write((root / "scenario.json").string(), scenario);

    auto config_for = [&](const fs::path& dir, int variant, const std::string& out) {
        std::ostringstream os;
        os << "{\n"
           << R"(  "paths": {"cases": ")" << (dir / "sim/cases.csv").string() << "\",\n"
           << R"(            "population": ")" << (dir / "sim/population.csv").string() << "\",\n"
           << R"(            "covariate": ")" << (dir / "sim/covariate.csv").string() << "\",\n"
           << R"(            "adjacency": ")" << (dir / "sim/adjacency.csv").string() << "\"},\n"
           << R"(  "date_range": {"start": "2020-03-01", "end": "2020-03-30"},)" << "\n"
           << R"(  "model": {"variant": )" << variant << R"(, "phi": 0.25, "beta_rc": 0.1},)" << "\n"
           << R"(  "sampler": {"n_iter": 4000, "burn_in": 1000, "thin": 10, "seed": 505},)" << "\n"
           << R"(  "output_dir": ")" << (dir / out).string() << "\"\n}\n";
        return os.str();
    };

    for (const char* run : {"run1", "run2"}) {
        const fs::path dir = root / run;
        fs::create_directories(dir);
        csv::atomic_write((dir / "m3.json").string(), config_for(dir, 3, "out_m3"));
        csv::atomic_write((dir / "m1.json").string(), config_for(dir, 1, "out_m1"));
        const std::string log = " >> " + (dir / "cli.log").string() + " 2>&1";
        if (run_cmd(cli + " simulate --scenario " + (root / "scenario.json").string() + " --out " +
                    (dir / "sim").string() + log) != 0)
            return {false, std::string(run) + ": simulate failed"};
        if (run_cmd(cli + " fit --config " + (dir / "m3.json").string() + log) != 0)
            return {false, std::string(run) + ": fit failed"};
        if (run_cmd(cli + " predict --config " + (dir / "m3.json").string() + " --trace " +
                    (dir / "out_m3/trace.csv").string() + log) != 0)
            return {false, std::string(run) + ": predict failed"};
        if (run_cmd(cli + " diagnose --trace " + (dir / "out_m3/trace.csv").string() + " --out " +
                    (dir / "diag").string() + log) != 0)
            return {false, std::string(run) + ": diagnose failed"};
        if (run_cmd(cli + " compare --config " + (dir / "m3.json").string() + " --config " +
                    (dir / "m1.json").string() + " --out " + (dir / "cmp").string() + log) != 0)
            return {false, std::string(run) + ": compare failed"};
    }

    // schema checks on run1
    const fs::path r1 = root / "run1";
    try {
        auto tf = read_trace_csv((r1 / "out_m3/trace.csv").string());
        if (tf.rows.size() != 300) return {false, "trace has wrong draw count"};
        csv::Reader fc((r1 / "out_m3/forecast.csv").string());
        if (fc.header() != std::vector<std::string>{"fips", "pred_mean", "lower95", "upper95",
                                                    "n_draws"} ||
            fc.rows().size() != 4)
            return {false, "forecast schema mismatch"};
        csv::Reader sm((r1 / "out_m3/summary.csv").string());
        csv::Reader dv((r1 / "out_m3/dic.csv").string());
        csv::Reader gw((r1 / "out_m3/geweke.csv").string());
        csv::Reader ms((r1 / "out_m3/mse.csv").string());
        csv::Reader mp((r1 / "out_m3/mspe.csv").string());
        if (ms.rows().size() != 4 * 30 || mp.rows().size() != 4 * 30)
            return {false, "surface csv row counts wrong"};
        csv::Reader cmp((r1 / "cmp/compare.csv").string());
        if (cmp.rows().size() != 2) return {false, "compare table row count wrong"};
        const double dic_first = csv::parse_real(cmp.rows()[0].fields[1], "cmp", 1);
        const double dic_second = csv::parse_real(cmp.rows()[1].fields[1], "cmp", 2);
        if (!(dic_first <= dic_second)) return {false, "compare table not sorted by DIC"};
        for (int i = 0; i < 4; ++i) {
            csv::Reader fit((r1 / ("out_m3/fitted_mean_9000" + std::to_string(i + 1) + ".csv"))
                                .string());
            if (fit.rows().size() != 30) return {false, "fitted profile row count wrong"};
        }
        csv::Reader dg((r1 / "diag/geweke.csv").string());
        if (dg.rows().empty()) return {false, "diagnose geweke empty"};
    } catch (const std::exception& e) {
        return {false, std::string("schema check failed: ") + e.what()};
    }

    // bit-identical rerun (cli.log differs by absolute paths, so compare outputs)
    for (const char* rel :
         {"out_m3/trace.csv", "out_m3/summary.csv", "out_m3/dic.csv", "out_m3/geweke.csv",
          "out_m3/forecast.csv", "out_m3/mse.csv", "out_m3/mspe.csv", "sim/cases.csv",
          "cmp/compare.csv", "diag/geweke.csv", "diag/dic.csv"}) {
        if (slurp(root / "run1" / rel) != slurp(root / "run2" / rel))
            return {false, std::string("rerun differs in ") + rel};
        if (slurp(root / "run1" / rel).empty())
            return {false, std::string("empty output ") + rel};
    }
    return {true, "simulate/fit/predict/diagnose/compare all exit 0, rerun bit-identical"};
}

// ---------------------------------------------------------------------------
// criterion 10: smoothed-mode pipeline (3-day smoothing + log-normal model)

Outcome criterion10() {
    // smoothing properties must hold exactly; inputs are multiples of 6 so
    // every division by 2 and 3 is exact in binary floating point
    {
        std::vector<double> c(12, 4.0);
        if (smooth_3day_centered(c) != c) return {false, "constant preservation failed"};
        Rng rng(8);
        std::vector<double> x(24), y(24);
        for (auto& v : x) v = 6.0 * std::floor(rng.uniform() * 20);
        for (auto& v : y) v = 6.0 * std::floor(rng.uniform() * 20);
        std::vector<double> combo(24);
        for (int k = 0; k < 24; ++k) combo[k] = 2.0 * x[k] + 0.5 * y[k];
        const auto sc = smooth_3day_centered(combo);
        const auto sx = smooth_3day_centered(x);
        const auto sy = smooth_3day_centered(y);
        for (int k = 0; k < 24; ++k)
            if (sc[k] != 2.0 * sx[k] + 0.5 * sy[k]) return {false, "linearity failed exactly"};
    }

    // criterion-4-style grid equivalence on a 1-region log-normal panel
    auto panel = blank_panel(1, 8, 5000.0);
    const long long y[8] = {2, 5, 9, 14, 11, 7, 4, 3};
    for (int j = 0; j < 8; ++j) panel.sym(0, j) = y[j];
    panel.smoothed = smooth_3day_centered(panel.sym);
    ModelSpec spec;
    spec.variant = Variant::M1;
    spec.include_icar = false;
    spec.data_model = DataModel::LogNormal;
    ParamVector init = initialize(spec, 1, 8);
    init.b1 = 0.2;
    const double tv = grid_equivalence_tv(panel, spec, init, 3030);

    // the full smoothed fit must produce a finite DIC
    SamplerConfig cfg;
    cfg.n_iter = 4000;
    cfg.burn_in = 1000;
    cfg.thin = 10;
    cfg.seed = 11;
    cfg.store_mu = false;
    auto trace = run_chain(panel, spec, nullptr, cfg);
    const auto d = dic(trace.deviances);

    std::ostringstream os;
    os << "TV " << tv << ", DIC " << d.dic;
    return {tv < 0.05 && std::isfinite(d.dic), os.str()};
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    std::string cli;
    for (int k = 1; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--criterion" && k + 1 < argc)
            only = std::atoi(argv[++k]);
        else if (arg == "--cli" && k + 1 < argc)
            cli = argv[++k];
        else {
            std::fprintf(stderr, "usage: acceptance [--criterion N] [--cli PATH]\n");
            return 2;
        }
    }

    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {1, "deviance oracle equivalence", criterion1},
        {2, "ICAR correctness", criterion2},
        {3, "conjugate Gibbs calibration", criterion3},
        {4, "grid-posterior equivalence", criterion4},
        {5, "parameter recovery", criterion5},
        {6, "DIC model discrimination", criterion6},
        {7, "one-step forecast coverage", criterion7},
        {8, "Geweke calibration", criterion8},
        {9, "CLI pipeline round trip", [&] { return criterion9(cli); }},
        {10, "smoothed-mode integrity", criterion10},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (only != 0 && e.id != only) continue;
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("%s criterion-%d %s: %s\n", o.pass ? "PASS" : "FAIL", e.id, e.name,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
