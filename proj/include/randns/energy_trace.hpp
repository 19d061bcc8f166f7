#pragma once

#include <array>
#include <vector>

namespace randns {

/// Time series recorded along a difference-equation run. Row r refers to
/// time t[r]; rows are written every trace_every steps plus t = 0 and t = T.
struct EnergyTrace {
    int dim = 2;
    double rate_exponent = 2.0;  // p of the L^p_t H^{-1}_x rate norm: 2 (d=2), 4/3 (d=3)

    std::vector<double> t;
    std::vector<double> l2sq;             // ||w||^2_{L2}
    std::vector<double> grad_sq;          // ||grad w||^2_{L2}
    std::vector<double> cum_enstrophy;    // 2 ∫_0^t ||grad w||^2
    std::vector<double> energy_E;         // l2sq + cum_enstrophy
    std::vector<double> energy_E_half;    // E(w) + E((-Δ)^{1/4} w)
    std::vector<double> dwdt_hm1;         // ||dw/dt||_{H^{-1}}
    std::vector<double> dual_rate;        // (∫_0^t ||dw/dt||^p_{H^{-1}})^{1/p}, running
    std::vector<double> g_norm;           // d=2: ||g||_{L4}; d=3: sum of g_probe
    std::vector<std::array<double, 3>> g_probe;  // d=3: ||Λ^{1/2}g||_{L6}, ||Λ^{1/2}g||_{L8/3}, ||g||_{L8}

    double duhamel_residual = -1.0;  // < 0 when not computed

    std::size_t rows() const { return t.size(); }
};

}  // namespace randns
