#pragma once

#include <span>
#include <vector>

#include "randns/energy_trace.hpp"
#include "randns/galerkin.hpp"

namespace randns {

struct EnergyBoundReport {
    double sup_E = 0;
    double sup_E_half = 0;
    double lambda_hat = 0;        // realized forcing norm from the trace
    bool finite = false;
    std::vector<double> refinement_sup_E;
    double refinement_delta = 0;  // max |sup E' - sup E| / sup E over the reruns
    bool stable = true;
    bool pass = false;
};

/// sup_t E(w), the realized forcing norm ||t^γ g|| (d=2: L4L4; d=3: the
/// three-term norm) and relative agreement of sup E with refined reruns
/// (10% tolerance). Throws std::invalid_argument if the trace does not span [0, T].
EnergyBoundReport energy_bound_monitor(const EnergyTrace& trace, double T, double alpha, double gamma,
                                       std::span<const EnergyTrace> refinements = {});

/// (∫_0^T ||dw/dt||^p_{H^{-1}} dt)^{1/p}, p = 2 for d=2 and 4/3 for d=3, by the
/// trapezoid rule over the trace rows.
double rate_norm(const EnergyTrace& trace, int dim);

/// ∫_a^b t^beta φ(t) dt for φ piecewise linear through (t_i, φ_i); beta > -1.
double weighted_time_integral(std::span<const double> t, std::span<const double> phi, double beta);

/// Largest ||v||_{L4} / (||v||_{L2}^{1/2} ||grad v||_{L2}^{1/2}) found by
/// random search over divergence-free fields at M=4, d=2, rounded up.
inline constexpr double kInterpolationConstant = 1.17;

/// ||v||_{L4} / (||v||_{L2}^{1/2} ||grad v||_{L2}^{1/2}); 0 for v = 0.
double interpolation_ratio(const SpectralField& v);

struct GronwallConfig {
    double nu1 = 0.25;
    double nu2 = 0.25;
    double nu3 = 0.25;
    double mu = 0.0;    // 0 selects 1/(4|c1|)
    double rho = 0.0;   // 0 selects min(T, 1)
    double slack = 1e-6;  // relative tolerance on ||v||^2 <= envelope

    /// Resolved copy; throws ConfigError unless all weights are positive and
    /// |c1| mu + nu1 + nu2 + nu3 = 1.
    GronwallConfig resolved(double c1, double T) const;
};

struct GronwallReport {
    std::vector<double> t;
    std::vector<double> v_sq;       // ||w1 - w2||^2
    std::vector<double> envelope;   // ||v(0)||^2 exp(∫_0^t ...), may overflow to inf
    std::vector<double> exponent;
    std::vector<double> log_envelope;
    double envelope_margin = 0;     // min over t > 0 of 1 - v_sq / envelope
    double v_final = 0;             // ||v(T)||
    double max_interpolation_ratio = 0;
    bool interpolation_ok = true;   // every snapshot ratio <= kInterpolationConstant
    bool within = false;
    bool pass = false;
};

/// Compares two d=2 trajectories that share grid, forcing and snapshot times.
/// Throws std::invalid_argument for d=3 or mismatched runs.
GronwallReport gronwall_uniqueness_check(const TrajectoryRecord& traj1, const TrajectoryRecord& traj2,
                                         const SpectralField& f_omega, const GronwallConfig& config = {});

/// log2(||a - b|| / ||b - c||) for final states of runs at dt, dt/2, dt/4.
double observed_order(const TrajectoryRecord& a, const TrajectoryRecord& b, const TrajectoryRecord& c);

/// (∫_0^{δ} ||w ⊗ w||^2_{L2} dt)^{1/2} over the snapshots, δ = min(delta, T).
double tensor_head_norm(const TrajectoryRecord& traj, double delta);

}  // namespace randns
