#pragma once

#include <optional>
#include <string>
#include <vector>

#include "randns/energy_trace.hpp"
#include "randns/field.hpp"

namespace randns {

enum class Integrator { ExponentialRK2, ExponentialRK4 };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator integrator);

struct DifferenceEqParams {
    double c1 = -1.0;
    double c2 = -1.0;
    double T = 1.0;
    double dt = 2.5e-4;
    Integrator integrator = Integrator::ExponentialRK4;

    // Optional graded mesh on [0, grading_span]: t_j = grading_span (j/J)^{1/(1-a/2)}
    // with a = grading_alpha and J = ceil(grading_span/dt). Off when grading_alpha == 0.
    double grading_alpha = 0.0;
    double grading_span = 0.01;

    int snapshot_every = 10;   // steps between stored snapshots
    int dense_steps = 40;      // additionally store every one of the first dense_steps steps
    int trace_every = 1;       // steps between trace rows
    int trilinear_every = 0;   // steps between b(w,w,w), b(g,w,w) checks; 0 = off

    double blowup_threshold = 1e12;  // ||w||^2_{L2} above this is a failure
    double divergence_tol = 1e-12;

    void validate() const;
};

struct TrilinearDiagnostics {
    std::size_t checked_steps = 0;
    double max_rel_www = 0.0;  // |b(w,w,w)| / (||(w.grad)w|| ||w||)
    double max_rel_gww = 0.0;  // |b(g,w,w)| / (||(g.grad)w|| ||w||)
};

struct TrajectoryRecord {
    GridSpec grid;
    DifferenceEqParams params;
    std::vector<double> times;           // snapshot times, strictly increasing
    std::vector<SpectralField> snapshots;
    EnergyTrace trace;
    TrilinearDiagnostics trilinear;
    std::size_t steps = 0;
    double max_divergence_defect = 0.0;

    bool completed = true;
    double failure_time = 0.0;
    std::string failure;

    const SpectralField& final_state() const { return snapshots.back(); }
};

/// Projected nonlinear and forcing part of the difference equation:
///   -N(w,w) + c1 (N(w,g) + N(g,w)) + c2 N(g,g),   N = nonlinear_term.
/// With c1 = c2 = -1 this is -N(w+g, w+g).
SpectralField coupling_terms(const SpectralField& w, const SpectralField& g, double c1, double c2);

/// -|k|^2 w + coupling_terms(w, g).
SpectralField rhs(const SpectralField& w, const SpectralField& g, const DifferenceEqParams& params);

/// Integrates the truncated difference equation from w(0) = w0 (zero when
/// absent) with forcing g(t) = e^{tΔ} f_omega. On non-finite values or
/// blow-up the partial record is returned with completed = false.
TrajectoryRecord integrate(const SpectralField& f_omega, const DifferenceEqParams& params,
                           const std::optional<SpectralField>& w0 = std::nullopt);

/// integrate(), throwing NumericalFailure when the run does not complete.
TrajectoryRecord solve(const SpectralField& f_omega, const DifferenceEqParams& params,
                       const std::optional<SpectralField>& w0 = std::nullopt);

/// Relative gap between the integrated w(T) and the mild formulation
///   e^{TΔ} w(0) + ∫_0^T e^{(T-s)Δ} F(s) ds,
/// with F interpolated by local cubics through the snapshots and integrated
/// against the exact exponential. Throws when the snapshots are too sparse.
double duhamel_residual(const TrajectoryRecord& traj, const SpectralField& f_omega);

struct ReconstructedU {
    std::vector<double> times;
    std::vector<SpectralField> u;       // e^{tΔ} f_omega + w(t) at snapshot times
    std::vector<double> residual_times; // interior snapshot times
    std::vector<double> residual;       // ||∂t u - Δu + N(u,u)||_{L2}, ∂t by finite differences
    std::vector<double> residual_rel;   // residual / (||∂t u||_{L2} + ||Δu||_{L2} + ||N(u,u)||_{L2})
};

ReconstructedU reconstruct_u(const TrajectoryRecord& traj, const SpectralField& f_omega);

/// Time nodes used by integrate() for these parameters.
std::vector<double> time_mesh(const DifferenceEqParams& params);

}  // namespace randns
