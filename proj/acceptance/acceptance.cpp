// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "randns/app.hpp"
#include "randns/datum.hpp"
#include "randns/galerkin.hpp"
#include "randns/heatflow.hpp"
#include "randns/randomize.hpp"
#include "randns/spectral.hpp"
#include "randns/verify.hpp"

using namespace randns;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

std::string sci(double a) { return fmt("%.3g", a); }

SpectralField forcing(int dim, int M, double alpha, std::uint64_t seed) {
    return randomize(rough_datum(GridSpec(dim, M), rough_decay(dim, alpha), 1), MultiplierLaw::Gaussian, {seed, 0});
}

double rel_energy_identity(const EnergyTrace& tr) {
    return std::abs(tr.l2sq.back() + tr.cum_enstrophy.back() - tr.l2sq.front()) / tr.l2sq.front();
}

Outcome exact_solutions() {
    DifferenceEqParams p;
    p.T = 1.0;
    p.dt = 1e-3;
    p.snapshot_every = 1000;
    p.dense_steps = 0;
    p.trace_every = 1000;
    const SpectralField tg = taylor_green(GridSpec(2, 8));
    const SpectralField abc = abc_flow(GridSpec(3, 8));
    const double e_tg = sobolev_norm(solve(SpectralField(tg.grid()), p, tg).final_state() - std::exp(-2.0) * tg, 0.0);
    const double e_abc =
        sobolev_norm(solve(SpectralField(abc.grid()), p, abc).final_state() - std::exp(-1.0) * abc, 0.0);
    return {e_tg <= 1e-8 && e_abc <= 1e-8,
            "L2 error Taylor-Green " + sci(e_tg) + ", ABC " + sci(e_abc) + " (tol 1e-8, M=8, dt=1e-3, T=1)"};
}

Outcome energy_identity() {
    DifferenceEqParams p;
    p.T = 1.0;
    p.dt = 1e-3;
    p.snapshot_every = 1000;
    p.dense_steps = 0;
    std::mt19937_64 rng(7);
    std::vector<std::pair<std::string, SpectralField>> cases{
        {"TG", taylor_green(GridSpec(2, 8))},
        {"ABC", abc_flow(GridSpec(3, 8))},
        {"random2d", 0.5 * oracle::random_divfree(GridSpec(2, 8), rng, -1.0)},
        {"random3d", 0.5 * oracle::random_divfree(GridSpec(3, 6), rng, -1.0)},
    };
    double worst = 0;
    std::string detail;
    for (const auto& [name, w0] : cases) {
        const double r = rel_energy_identity(solve(SpectralField(w0.grid()), p, w0).trace);
        worst = std::max(worst, r);
        detail += name + " " + sci(r) + ", ";
    }
    return {worst <= 1e-6, detail + "worst " + sci(worst) + " (tol 1e-6, dt=1e-3)"};
}

Outcome trilinear_neutrality() {
    DifferenceEqParams p;
    p.T = 0.25;
    p.dt = 1e-3;
    p.trilinear_every = 1;
    p.snapshot_every = 250;
    p.dense_steps = 0;
    const auto rec = solve(forcing(2, 16, 0.3, 3), p);
    const double worst = std::max(rec.trilinear.max_rel_www, rec.trilinear.max_rel_gww);
    return {worst <= 1e-12 && rec.trilinear.checked_steps == rec.steps,
            "b(w,w,w) " + sci(rec.trilinear.max_rel_www) + ", b(g,w,w) " + sci(rec.trilinear.max_rel_gww) + " over " +
                std::to_string(rec.trilinear.checked_steps) + " steps (tol 1e-12 relative, d=2, M=16)"};
}

Outcome convolution_oracle() {
    std::mt19937_64 rng(2024);
    int cases = 0;
    double worst = 0;
    for (int k = 0; k < 120; ++k) {
        const int d = k % 3 == 2 ? 3 : 2;
        const int M = 1 + static_cast<int>(rng() % (d == 2 ? 6 : 4));
        const GridSpec g(d, M);
        const SpectralField u = oracle::random_divfree(g, rng, -0.5 * static_cast<double>(rng() % 3));
        const SpectralField v = oracle::random_divfree(g, rng);
        for (const auto* b : {&v, &u}) {
            const SpectralField fast = nonlinear_term(u, *b);
            const SpectralField ref = oracle::direct_leray(oracle::direct_advection(u, *b));
            worst = std::max(worst, oracle::l2(fast - ref) / std::max(oracle::l2(ref), 1e-300));
            ++cases;
        }
    }
    return {worst <= 1e-12 && cases >= 100,
            std::to_string(cases) + " random divergence-free cases, d in {2,3}, M <= 6, worst relative " + sci(worst) +
                " (tol 1e-12)"};
}

Outcome randomization() {
    std::mt19937_64 rng(5);
    bool rad_exact = true;
    std::size_t gau_sites = 0, gau_differ = 0;
    double gau_rel = 0;
    for (int d : {2, 3}) {
        const SpectralField f = oracle::random_field(GridSpec(d, 6), rng);
        for (std::uint64_t s = 0; s < 10; ++s) {
            rad_exact = rad_exact && randomize(leray_project(f), MultiplierLaw::Rademacher, {s, 0}) ==
                                         leray_project(randomize(f, MultiplierLaw::Rademacher, {s, 0}));
            const SpectralField a = randomize(leray_project(f), MultiplierLaw::Gaussian, {s, 0});
            const SpectralField b = leray_project(randomize(f, MultiplierLaw::Gaussian, {s, 0}));
            gau_rel = std::max(gau_rel, oracle::rel_diff(a, b));
            for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
                ++gau_sites;
                if (a.coeffs()[i] != b.coeffs()[i]) ++gau_differ;
            }
        }
    }
    const bool commute = rad_exact && gau_differ == 0;

    const SpectralField f = rough_datum(GridSpec(2, 8), rough_decay(2, 0.3), 11);
    const double target = std::pow(sobolev_norm(f, -0.3), 2);
    const int n = 10000;
    double s1 = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        const double v =
            std::pow(sobolev_norm(randomize(f, MultiplierLaw::Gaussian, {8, static_cast<std::uint64_t>(k)}), -0.3), 2);
        s1 += v;
        s2 += v * v;
    }
    const double mean = s1 / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    const double z = std::abs(mean - target) / se;

    const std::vector<double> qs{2, 4, 6, 8};
    bool moments = true;
    double fitted = 0, bound = 0;
    std::mt19937_64 crng(9);
    std::normal_distribution<double> N;
    for (int len : {1, 16, 200}) {
        std::vector<double> c(len);
        for (double& x : c) x = N(crng);
        for (auto law : {MultiplierLaw::Gaussian, MultiplierLaw::Rademacher}) {
            const auto r = moment_growth_check(c, law, qs, 20000, static_cast<std::uint64_t>(len));
            moments = moments && !r.violation;
            fitted = std::max(fitted, r.fitted_constant);
            bound = r.bound_constant;
        }
    }
    std::string detail = "Leray commutation: rademacher " + std::string(rad_exact ? "bit-exact" : "NOT bit-exact") +
                         ", gaussian " + std::to_string(gau_differ) + "/" + std::to_string(gau_sites) +
                         " coefficients differ (max relative " + sci(gau_rel) +
                         "); E||f^w||^2_{H^-a} off by " + fmt("%.2f", z) + " SE at 1e4 samples (tol 3); moment constant " +
                         fmt("%.3f", fitted) + " <= " + fmt("%.3f", bound) + " for q in {2,4,6,8}";
    return {commute && z <= 3.0 && moments, detail};
}

Outcome tail_shape() {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec g(2, 16);
    const SpectralField f = rough_datum(g, rough_decay(2, 0.3), 1);
    const auto probes = standard_probes(2, 0.3, -0.05, 1.0);
    auto r = monte_carlo_exceedance(f, MultiplierLaw::Gaussian, probes, {}, 1000, 0, 1);
    const auto lambdas = default_lambdas(r.norms);
    r = exceedance_from_norms(std::move(r.norms), lambdas);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // single mode: ||l f|| = |l| c, P(|l| > x) = erfc(x / sqrt 2)
    SpectralField one = single_pair(GridSpec(2, 2), {1, 0, 0}, 1, 1.0);
    NormProbeSpec p;
    p.sigma = 0;
    p.gamma = 0;
    p.p = 2;
    p.q = 2;
    p.alpha = 0.3;
    p.points = 60;
    const double c = mixed_norm(one, p);
    std::vector<double> lam;
    for (double x : {0.5, 1.0, 1.5, 2.0, 2.5}) lam.push_back(x * c);
    const std::vector<NormProbeSpec> ps{p};
    const auto e = monte_carlo_exceedance(one, MultiplierLaw::Gaussian, ps, lam, 10000, 17, 1);
    double worst = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double exact = std::erfc(lam[i] / c / std::sqrt(2.0));
        worst = std::max(worst, std::abs(e.p_hat[i] - exact) / (e.ci_hi[i] - e.ci_lo[i]));
    }
    const bool ok = r.slope < 0 && r.r2 >= 0.8 && r.fit_bins >= 2 && worst <= 3.0 && secs < 600;
    return {ok, "slope " + fmt("%.3f", r.slope) + ", R^2 " + fmt("%.3f", r.r2) + " over " +
                    std::to_string(r.fit_bins) + " bins (N=1000, d=2, M=16, " + fmt("%.0f", secs) +
                    " s); erfc oracle worst gap " + fmt("%.2f", worst) + " Wilson widths (tol 3)"};
}

Outcome heat_bounds() {
    const TimeGrid tg{1e-4, 1.0, 100};
    int count = 0, ok = 0;
    double worst_ratio = 1.0;
    for (double alpha : {0.1, 0.3}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            const SpectralField f =
                randomize(rough_datum(GridSpec(2, 8), rough_decay(2, alpha), 100 + s), MultiplierLaw::Gaussian, {s, 0});
            for (int k : {0, 1}) {
                const auto r = deterministic_bound_check(f, alpha, k, tg, 2);
                ++count;
                if (r.pass) ++ok;
                for (const auto* lv : {&r.c2_levels, &r.cinf_levels}) {
                    const auto [lo, hi] = std::minmax_element(lv->begin(), lv->end());
                    worst_ratio = std::max(worst_ratio, *hi / *lo);
                }
            }
        }
    }
    return {ok == count, std::to_string(ok) + "/" + std::to_string(count) +
                             " (datum, k) checks finite and stable; worst level spread x" + fmt("%.4f", worst_ratio) +
                             " across two refinements (tol x2)"};
}

// Runs shared by the energy and Duhamel criteria.
struct EnergyRuns {
    double d2_delta = 0, d3_delta = 0;
    double d2_sup = 0, d3_sup = 0;
    bool d2_pass = false, d3_pass = false;
    double d3_seconds = 0;
    double default_residual = -1, default_abs = -1;
};

EnergyRuns& energy_runs() {
    static EnergyRuns runs = [] {
        EnergyRuns e;
        {
            DifferenceEqParams p;  // defaults: T=1, dt=2.5e-4
            const SpectralField f32 = forcing(2, 32, 0.3, 4);
            const auto base = solve(f32, p);
            e.default_residual = duhamel_residual(base, f32);
            e.default_abs = e.default_residual * sobolev_norm(base.final_state(), 0.0);
            DifferenceEqParams coarse = p;
            coarse.snapshot_every = 100000;
            coarse.dense_steps = 0;
            const auto m48 = solve(forcing(2, 48, 0.3, 4), coarse);
            coarse.dt = p.dt / 2;
            const auto half = solve(f32, coarse);
            std::vector<EnergyTrace> refs{m48.trace, half.trace};
            const auto r = energy_bound_monitor(base.trace, p.T, 0.3, -0.05, refs);
            e.d2_delta = r.refinement_delta;
            e.d2_sup = r.sup_E;
            e.d2_pass = r.pass;
        }
        {
            const auto t0 = std::chrono::steady_clock::now();
            DifferenceEqParams p;
            p.dt = 2e-3;
            p.trace_every = 5;
            p.snapshot_every = 100000;
            p.dense_steps = 0;
            const SpectralField f12 = forcing(3, 12, 0.1, 4);
            const auto base = solve(f12, p);
            const auto m16 = solve(forcing(3, 16, 0.1, 4), p);
            DifferenceEqParams half = p;
            half.dt = p.dt / 2;
            half.trace_every = 10;
            const auto h = solve(f12, half);
            std::vector<EnergyTrace> refs{m16.trace, h.trace};
            const auto r = energy_bound_monitor(base.trace, p.T, 0.1, -0.05, refs);
            e.d3_delta = r.refinement_delta;
            e.d3_sup = r.sup_E;
            e.d3_pass = r.pass;
            e.d3_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        return e;
    }();
    return runs;
}

Outcome energy_boundedness() {
    const EnergyRuns& e = energy_runs();
    return {e.d2_pass && e.d3_pass && e.d3_seconds < 600,
            "d=2 alpha=0.3: sup E " + fmt("%.4f", e.d2_sup) + ", max change " + fmt("%.2f%%", 100 * e.d2_delta) +
                " (M 32->48, dt/2); d=3 alpha=0.1: sup E " + fmt("%.4f", e.d3_sup) + ", max change " +
                fmt("%.2f%%", 100 * e.d3_delta) + " (M 12->16, dt/2), " + fmt("%.0f", e.d3_seconds) +
                " s (tol 10%)"};
}

Outcome duhamel_equivalence() {
    const SpectralField f = forcing(2, 8, 0.3, 6);
    std::vector<double> res;
    for (double dt : {8e-4, 4e-4, 2e-4, 1e-4}) {
        DifferenceEqParams p;
        p.T = 0.5;
        p.dt = dt;
        p.snapshot_every = 1;
        p.dense_steps = 0;
        p.trace_every = 100000;
        res.push_back(duhamel_residual(solve(f, p), f));
    }
    const double order = std::log2(res[2] / res[3]);
    const EnergyRuns& e = energy_runs();
    std::string seq;
    for (double r : res) seq += sci(r) + " ";
    return {std::abs(order - 4.0) <= 0.5 && e.default_abs <= 1e-4,
            "residuals " + seq + "(dt 8e-4..1e-4, M=8), observed order " + fmt("%.2f", order) +
                " (tol 4 +- 0.5); default run M=32 dt=2.5e-4: relative " + sci(e.default_residual) + ", absolute " +
                sci(e.default_abs) + " (tol 1e-4)"};
}

Outcome uniqueness() {
    const SpectralField f = forcing(2, 16, 0.3, 8);
    std::vector<TrajectoryRecord> runs;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        DifferenceEqParams p;
        p.T = 0.5;
        p.dt = dt;
        p.snapshot_every = 100000;
        p.dense_steps = 0;
        p.trace_every = 100000;
        runs.push_back(solve(f, p));
    }
    const double order = observed_order(runs[0], runs[1], runs[2]);

    DifferenceEqParams p;
    p.T = 0.5;
    p.dt = 1e-3;
    p.snapshot_every = 5;
    p.dense_steps = 0;
    const auto a = solve(f, p);
    const auto b = solve(f, p, 1e-6 * taylor_green(f.grid()));
    const auto g = gronwall_uniqueness_check(a, b, f);
    return {std::abs(order - 4.0) <= 0.5 && g.within,
            "zero-data order " + fmt("%.2f", order) + " (dt 4e-3/2e-3/1e-3, tol 4 +- 0.5); eps=1e-6, M=16, T=0.5: " +
                "||v(T)||^2/||v(0)||^2 = " + sci(g.v_sq.back() / g.v_sq.front()) + ", envelope exponent " +
                fmt("%.1f", g.exponent.back()) + ", within envelope " + (g.within ? "yes" : "no") +
                ", interpolation ratio " + fmt("%.3f", g.max_interpolation_ratio)};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "randns_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::string> first;
    std::size_t compared = 0, equal = 0;
    for (int workers : {1, 8}) {
        app::RunConfig cfg;
        cfg.M = 12;
        cfg.samples = 200;
        cfg.workers = workers;
        cfg.output = root / ("tail_" + std::to_string(workers));
        app::run_tail(cfg);
        cfg.M = 12;
        cfg.T = 0.2;
        cfg.dt = 1e-3;
        cfg.output = root / ("solve_" + std::to_string(workers));
        app::run_solve(cfg);
        std::vector<std::string> files;
        for (const char* name : {"tail/tail.json", "tail/tail_norms.csv", "solve/solve.json", "solve/trace.csv",
                                 "solve/snapshots/w_000000.snsf", "solve/snapshots/index.csv"}) {
            const std::string s(name);
            const std::string dir = s.substr(0, s.find('/')) + "_" + std::to_string(workers);
            files.push_back(slurp(root / dir / s.substr(s.find('/') + 1)));
        }
        if (first.empty()) {
            first = files;
        } else {
            for (std::size_t i = 0; i < files.size(); ++i) {
                ++compared;
                if (files[i] == first[i] && !files[i].empty()) ++equal;
            }
        }
    }
    fs::remove_all(root);
    return {compared == equal && compared > 0,
            std::to_string(equal) + "/" + std::to_string(compared) +
                " artifacts byte-identical between 1 and 8 workers (tail JSON/CSV, solve JSON/CSV/SNSF)"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact-solution regression", exact_solutions},
        {"energy identity", energy_identity},
        {"trilinear neutrality", trilinear_neutrality},
        {"convolution oracle", convolution_oracle},
        {"randomization invariants", randomization},
        {"tail shape", tail_shape},
        {"deterministic heat bounds", heat_bounds},
        {"energy boundedness", energy_boundedness},
        {"Duhamel equivalence", duhamel_equivalence},
        {"2D uniqueness", uniqueness},
        {"determinism", determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
