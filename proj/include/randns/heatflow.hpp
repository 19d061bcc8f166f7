#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "randns/field.hpp"
#include "randns/randomize.hpp"

namespace randns {

/// e^{tΔ} f: the coefficient at n is multiplied by e^{-|n|^2 t}. Throws for t < 0.
SpectralField heat_flow(const SpectralField& f, double t);

/// Geometric time grid t_j = t_min r^j, j = 0..points-1, ending at T.
struct TimeGrid {
    double t_min = 1e-6;
    double T = 1.0;
    int points = 400;

    void validate() const;
    std::vector<double> times() const;
    /// Same endpoints with (points-1)*factor + 1 nodes; contains the coarse nodes.
    TimeGrid refined(int factor) const;
};

struct DeterministicBoundReport {
    int k = 0;
    double alpha = 0;
    double data_norm = 0;          // ||f||_{H^{-alpha}}
    std::vector<double> t;         // base grid
    std::vector<double> l2;        // ||grad^k e^{tΔ} f||_{L^2}
    std::vector<double> linf;      // ||grad^k e^{tΔ} f||_{L^inf}
    std::vector<double> c2_levels;   // smallest L^2 constant per refinement level
    std::vector<double> cinf_levels; // smallest L^inf constant per refinement level
    double c2 = 0;
    double cinf = 0;
    bool finite = false;
    bool stable = false;  // constants agree within a factor 2 across levels
    bool pass = false;
};

/// Smallest constants making
///   ||grad^k e^{tΔ} f||_{L^2}   <= C2   (1 + t^{-(alpha+k)/2}) ||f||_{H^{-alpha}}
///   ||grad^k e^{tΔ} f||_{L^inf} <= Cinf max{t^{-1}, t^{-(k+alpha+d/2)}}^{1/2} ||f||_{H^{-alpha}}
/// hold on the grid, for k in {0,1}, recomputed on `refinements` successively
/// doubled grids.
DeterministicBoundReport deterministic_bound_check(const SpectralField& f, double alpha, int k,
                                                   const TimeGrid& grid, int refinements = 1);

/// Parameters of the weighted space-time norm ||t^γ (-Δ)^{σ/2} e^{tΔ} f||_{L^q_t L^p_x}.
struct NormProbeSpec {
    double sigma = 0.0;
    double gamma = 0.0;
    double p = 4.0;
    double q = 4.0;
    double T = 1.0;
    double alpha = 0.0;
    double t_min = 1e-6;
    int points = 400;

    /// (sigma + alpha - 2 gamma) q < 2
    bool admissible() const;
    /// Throws ConfigError naming the violated condition.
    void validate() const;
    TimeGrid time_grid() const { return {t_min, T, points}; }
};

struct MixedNormResult {
    double value = 0;        // quadrature over [t_min, T]
    double head_defect = 0;  // estimate of the omitted [0, t_min] contribution to value^q
};

/// Trapezoid rule in log-time on the probe's geometric grid. The spatial norm
/// uses lp_norm. Throws ConfigError for an inadmissible probe.
MixedNormResult mixed_norm_detail(const SpectralField& f, const NormProbeSpec& probe);
double mixed_norm(const SpectralField& f, const NormProbeSpec& probe);

/// The forcing norm controlling the difference equation:
///   d=2: ||t^γ g||_{L^4 L^4}
///   d=3: ||t^γ Λ^{1/2} g||_{L^2 L^6} + ||t^γ Λ^{1/2} g||_{L^{8/3} L^{8/3}} + ||t^γ g||_{L^8 L^8}
std::vector<NormProbeSpec> standard_probes(int dim, double alpha, double gamma, double T,
                                           double t_min = 1e-6, int points = 400);
double probe_norm(const SpectralField& f, std::span<const NormProbeSpec> probes);

struct ExceedanceReport {
    std::vector<double> lambda;
    std::vector<double> p_hat;
    std::vector<double> ci_lo;  // Wilson 95% interval
    std::vector<double> ci_hi;
    std::vector<std::size_t> exceed_count;
    double slope = 0;       // least squares slope of log p_hat against lambda^2
    double intercept = 0;
    double r2 = 0;
    std::size_t fit_bins = 0;  // bins with at least 10 exceedances
    std::size_t n_samples = 0;
    std::vector<double> norms;        // per sample, in sample order
    std::vector<int> level_index;     // smallest j >= 0 with norm <= 2^j
};

/// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.96);

/// Smallest j >= 0 with value <= 2^j.
int dyadic_level(double value);

/// Samples f^ω for sample indices 0..n-1 under `seed`, evaluates the probe
/// norm and reports empirical exceedance P(norm > lambda). Bit-reproducible
/// for any worker count.
ExceedanceReport monte_carlo_exceedance(const SpectralField& f, MultiplierLaw law,
                                        std::span<const NormProbeSpec> probes,
                                        std::span<const double> lambdas, std::size_t n,
                                        std::uint64_t seed, int workers = 1);

/// `count` equally spaced thresholds from the sample median up to the level
/// exceeded by exactly 10 samples (fewer when n is small).
std::vector<double> default_lambdas(std::vector<double> norms, int count = 12);

/// Exceedance statistics for precomputed norms (same fit rules).
ExceedanceReport exceedance_from_norms(std::vector<double> norms, std::span<const double> lambdas);

}  // namespace randns
