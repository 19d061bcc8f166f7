#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randns/field.hpp"

namespace randns {

/// Unit-variance, mean-zero multiplier laws. Both satisfy the moment
/// generating bound E[e^{γ l}] <= e^{γ²/2}.
enum class MultiplierLaw { Gaussian, Rademacher };

MultiplierLaw parse_law(const std::string& name);
std::string to_string(MultiplierLaw law);

/// Address of one realization: the multiplier at site n is a function of
/// (master_seed, sample_index, canonical(n)) only.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;
};

/// One draw per canonical site, mirrored so l(-n) = l(n). Lattice storage order.
std::vector<double> sample_multipliers(MultiplierLaw law, const SeedSpec& seed, const GridSpec& grid);

/// Diagonal randomization f^ω(n) = l_n(ω) f(n). Real, mean-zero input required;
/// reality, zero mean and the divergence-free flag carry over to the output.
SpectralField randomize(const SpectralField& f, MultiplierLaw law, const SeedSpec& seed);

struct MomentEstimate {
    double q = 0;
    double norm = 0;        // (E|S|^q)^{1/q}
    double norm_lo = 0;     // 3-sigma band on the estimate
    double norm_hi = 0;
    double ratio = 0;       // norm / (sqrt(q) ||c||_2)
    double ratio_lo = 0;
    double ratio_hi = 0;
};

struct MomentReport {
    std::vector<MomentEstimate> per_q;
    double fitted_constant = 0;  // max ratio over q
    double bound_constant = 0;   // constant implied by the e^{γ²/2} moment bound
    std::size_t samples = 0;
    bool violation = false;      // some ratio exceeds bound_constant beyond 3 sigma
};

/// Empirical L^q(Ω) norms of S = sum_r c_r l_r against C sqrt(q) ||c||_2.
/// Throws std::invalid_argument on an empty sequence or q < 2.
MomentReport moment_growth_check(std::span<const double> c, MultiplierLaw law,
                                 std::span<const double> qs, std::size_t samples,
                                 std::uint64_t seed, int workers = 1);

/// sup_{q>=2} (q 2^{q/2} Γ(q/2))^{1/q} / sqrt(q) = sqrt(2): the moment constant
/// obtained from the tail bound 2 e^{-λ²/2}.
double subgaussian_moment_constant();

}  // namespace randns
