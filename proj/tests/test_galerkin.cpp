#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "randns/datum.hpp"
#include "randns/errors.hpp"
#include "randns/galerkin.hpp"
#include "randns/heatflow.hpp"
#include "randns/randomize.hpp"
#include "randns/spectral.hpp"

using namespace randns;

namespace {

DifferenceEqParams params(double T, double dt) {
    DifferenceEqParams p;
    p.T = T;
    p.dt = dt;
    p.snapshot_every = 5;
    return p;
}

SpectralField forcing(int d, int M, double alpha, std::uint64_t seed, double amp = 1.0) {
    SpectralField f = rough_datum(GridSpec(d, M), rough_decay(d, alpha), seed, amp);
    return randomize(f, MultiplierLaw::Gaussian, {seed, 0});
}

}  // namespace

TEST(Params, Validation) {
    DifferenceEqParams p;
    EXPECT_NO_THROW(p.validate());
    p.dt = 2.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = DifferenceEqParams{};
    p.T = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = DifferenceEqParams{};
    p.grading_alpha = 2.5;
    EXPECT_THROW(p.validate(), ConfigError);
    EXPECT_EQ(parse_integrator("exponential-rk2"), Integrator::ExponentialRK2);
    EXPECT_THROW(parse_integrator("euler"), ConfigError);
}

TEST(Mesh, UniformAndGraded) {
    auto t = time_mesh(params(1.0, 0.3));
    ASSERT_EQ(t.size(), 5u);
    EXPECT_EQ(t.back(), 1.0);
    DifferenceEqParams p = params(1.0, 0.01);
    p.grading_alpha = 0.4;
    p.grading_span = 0.1;
    auto g = time_mesh(p);
    EXPECT_NEAR(g[10], 0.1, 1e-15);
    EXPECT_LT(g[1], 0.01);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    EXPECT_EQ(g.back(), 1.0);
}

TEST(Rhs, ZeroAndTaylorGreen) {
    GridSpec grid(2, 6);
    SpectralField z(grid);
    DifferenceEqParams p;
    EXPECT_EQ(oracle::l2(rhs(z, z, p)), 0.0);
    SpectralField tg = taylor_green(grid, 0.7);
    SpectralField r = rhs(tg, z, p);
    EXPECT_LT(oracle::rel_diff(r, -2.0 * tg), 1e-14);
}

TEST(Rhs, ForcingOnlyMatchesConvolutionOracle) {
    for (int d : {2, 3}) {
        std::mt19937_64 rng(7 + d);
        GridSpec grid(d, 4);
        SpectralField g = oracle::random_divfree(grid, rng);
        SpectralField z(grid);
        DifferenceEqParams p;
        p.c2 = 0.7;
        SpectralField expect = 0.7 * oracle::direct_leray(oracle::direct_advection(g, g));
        EXPECT_LT(oracle::rel_diff(rhs(z, g, p), expect), 1e-12);
    }
}

TEST(Rhs, CouplingMatchesSeparateTerms) {
    std::mt19937_64 rng(11);
    GridSpec grid(2, 5);
    SpectralField w = oracle::random_divfree(grid, rng), g = oracle::random_divfree(grid, rng);
    const double c1 = 0.3, c2 = -1.7;
    SpectralField expect = -1.0 * nonlinear_term(w, w);
    expect.axpy(c1, nonlinear_term(w, g));
    expect.axpy(c1, nonlinear_term(g, w));
    expect.axpy(c2, nonlinear_term(g, g));
    EXPECT_LT(oracle::rel_diff(coupling_terms(w, g, c1, c2), expect), 1e-13);
    // physical convention: -N(u, u) with u = w + g
    EXPECT_LT(oracle::rel_diff(coupling_terms(w, g, -1, -1), -1.0 * nonlinear_term(w + g, w + g)), 1e-13);
}

TEST(Solve, ZeroDataGivesZeroBitExact) {
    SpectralField f(GridSpec(2, 6));
    DifferenceEqParams p = params(0.1, 0.01);
    p.snapshot_every = 1;
    auto rec = solve(f, p);
    for (const auto& s : rec.snapshots) {
        for (const auto& c : s.coeffs()) EXPECT_TRUE(c == cplx(0.0));
    }
    for (double e : rec.trace.energy_E) EXPECT_EQ(e, 0.0);
    EXPECT_EQ(duhamel_residual(rec, f), 0.0);
}

TEST(Solve, TaylorGreenDecay) {
    GridSpec grid(2, 8);
    SpectralField tg = taylor_green(grid);
    for (auto integ : {Integrator::ExponentialRK4, Integrator::ExponentialRK2}) {
        DifferenceEqParams p = params(1.0, 1e-3);
        p.integrator = integ;
        auto rec = solve(SpectralField(grid), p, tg);
        const double err = oracle::l2(rec.final_state() - std::exp(-2.0) * tg);
        EXPECT_LT(err, 1e-8) << to_string(integ);
        const double e0 = rec.trace.energy_E.front();
        const double tol = integ == Integrator::ExponentialRK4 ? 1e-10 : 1e-5;
        EXPECT_NEAR(rec.trace.energy_E.back() / e0, 1.0, tol);
    }
}

TEST(Solve, BeltramiDecay) {
    GridSpec grid(3, 4);
    SpectralField abc = abc_flow(grid, 1.0, 0.7, 0.4);
    auto rec = solve(SpectralField(grid), params(1.0, 1e-3), abc);
    EXPECT_LT(oracle::l2(rec.final_state() - std::exp(-1.0) * abc), 1e-8);
}

TEST(Solve, UnforcedEnergyIdentity) {
    std::mt19937_64 rng(5);
    GridSpec grid(2, 8);
    SpectralField w0 = oracle::random_divfree(grid, rng, -2.0);
    auto rec = solve(SpectralField(grid), params(0.5, 1e-3), w0);
    const auto& tr = rec.trace;
    for (std::size_t r = 0; r < tr.rows(); ++r) {
        EXPECT_NEAR(tr.energy_E[r] / tr.energy_E[0], 1.0, 1e-8);
        if (r) EXPECT_GE(tr.cum_enstrophy[r], tr.cum_enstrophy[r - 1]);
    }
}

TEST(Solve, ForcedInvariantsAndTrilinear) {
    SpectralField f = forcing(2, 8, 0.3, 3);
    DifferenceEqParams p = params(0.2, 1e-3);
    p.trilinear_every = 1;
    auto rec = solve(f, p);
    EXPECT_EQ(rec.trilinear.checked_steps, rec.steps);
    EXPECT_LT(rec.trilinear.max_rel_www, 1e-12);
    EXPECT_LT(rec.trilinear.max_rel_gww, 1e-12);
    EXPECT_LT(rec.max_divergence_defect, 1e-12);
    for (const auto& s : rec.snapshots) {
        EXPECT_EQ(s.hermitian_defect(), 0.0);
        EXPECT_EQ(s.mean_defect(), 0.0);
    }
    for (std::size_t i = 1; i < rec.times.size(); ++i) EXPECT_GT(rec.times[i], rec.times[i - 1]);
    EXPECT_GT(rec.trace.g_norm.front(), rec.trace.g_norm.back());
}

TEST(Solve, ForcedEnergyBookkeeping) {
    // d/dt ||w||^2 + 2||grad w||^2 = 2 <coupling(w,g), w>, and <N(g,w), w> = 0
    SpectralField f = forcing(2, 6, 0.3, 4);
    DifferenceEqParams p = params(0.05, 1e-4);
    p.snapshot_every = 1;
    auto rec = solve(f, p);
    const std::size_t m = rec.times.size() / 2;
    const double h = rec.times[m + 1] - rec.times[m];
    const double dl2 = (oracle::l2(rec.snapshots[m + 1]) * oracle::l2(rec.snapshots[m + 1]) -
                        oracle::l2(rec.snapshots[m - 1]) * oracle::l2(rec.snapshots[m - 1])) / (2 * h);
    const SpectralField& w = rec.snapshots[m];
    const SpectralField g = heat_flow(f, rec.times[m]);
    const double diss = 2 * std::pow(homogeneous_norm(w, 1.0), 2);
    const double work = 2 * inner(coupling_terms(w, g, p.c1, p.c2), w);
    EXPECT_NEAR(dl2 + diss, work, 1e-5 * (std::abs(work) + diss));
    EXPECT_LT(std::abs(trilinear(g, w, w)), 1e-13 * (oracle::l2(g) * oracle::l2(w) * homogeneous_norm(w, 1.0)));
}

TEST(Solve, RejectsBadInput) {
    std::mt19937_64 rng(6);
    SpectralField bad = oracle::random_field(GridSpec(2, 4), rng);
    EXPECT_THROW(solve(bad, params(0.1, 0.01)), std::invalid_argument);
}

TEST(Solve, BlowUpReportsTime) {
    SpectralField f = forcing(2, 6, 0.3, 5, 50.0);
    DifferenceEqParams p = params(1.0, 0.05);
    p.blowup_threshold = 1e3;
    auto rec = integrate(f, p);
    EXPECT_FALSE(rec.completed);
    EXPECT_GT(rec.failure_time, 0.0);
    EXPECT_THROW(solve(f, p), NumericalFailure);
}

TEST(Duhamel, TaylorGreenAndForced) {
    GridSpec grid(2, 8);
    SpectralField tg = taylor_green(grid);
    auto rec = solve(SpectralField(grid), params(1.0, 1e-3), tg);
    EXPECT_LT(duhamel_residual(rec, SpectralField(grid)), 1e-6);

    SpectralField f = forcing(2, 8, 0.3, 8);
    double prev = 1.0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        DifferenceEqParams p = params(0.5, dt);
        p.snapshot_every = 2;
        const double r = duhamel_residual(solve(f, p), f);
        EXPECT_LT(r, prev);
        prev = r;
    }
    EXPECT_LT(prev, 1e-4);
}

TEST(Duhamel, InsufficientSnapshots) {
    GridSpec grid(2, 4);
    DifferenceEqParams p = params(0.1, 0.05);
    auto rec = solve(SpectralField(grid), p, taylor_green(grid));
    EXPECT_THROW(duhamel_residual(rec, SpectralField(grid)), std::invalid_argument);
}

TEST(Reconstruct, SignConventionGuard) {
    SpectralField f = forcing(2, 6, 0.3, 9);
    DifferenceEqParams p = params(0.2, 5e-4);
    p.snapshot_every = 4;
    auto phys = reconstruct_u(solve(f, p), f);
    p.c1 = p.c2 = 1.0;
    auto other = reconstruct_u(solve(f, p), f);
    double max_phys = 0, min_other = 1e9;
    for (std::size_t i = 0; i < phys.residual_rel.size(); ++i) {
        if (phys.residual_times[i] < 0.02) continue;
        max_phys = std::max(max_phys, phys.residual_rel[i]);
        min_other = std::min(min_other, other.residual_rel[i]);
    }
    EXPECT_LT(max_phys, 1e-3);
    EXPECT_GT(min_other, 100 * max_phys);
}

TEST(Reconstruct, PureHeatMode) {
    GridSpec grid(2, 4);
    SpectralField f = single_pair(grid, {0, 1, 0}, 0, 1.0);
    auto rec = solve(f, params(0.1, 0.01));
    // a single mode with itself has no projected self-interaction, so w stays 0
    EXPECT_LT(oracle::l2(rec.final_state()), 1e-15);
    auto u = reconstruct_u(rec, f);
    EXPECT_LT(oracle::rel_diff(u.u.back(), std::exp(-0.1) * f), 1e-15);
}
