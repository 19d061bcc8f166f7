#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "randns/fft.hpp"
#include "randns/field.hpp"

namespace randns {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Leray projection (I - n n^T / |n|^2) mode by mode. The zero mode stays zero.
SpectralField leray_project(const SpectralField& f);

/// (sum_n <n>^{2s} |c(n)|^2)^{1/2} with <n> = (1 + |n|^2)^{1/2}.
double sobolev_norm(const SpectralField& f, double s);

/// Homogeneous Sobolev seminorm (sum_n |n|^{2s} |c(n)|^2)^{1/2}; s=1 gives ||grad f||_{L^2}.
double homogeneous_norm(const SpectralField& f, double s);

/// L^p norm with respect to the normalized measure dx / (2π)^d.
///
/// Even integer p: exact, by uniform quadrature on >= pM+2 points per axis.
/// p = infinity: maximum over the pad_factor-oversampled grid (approximate).
/// Other real p >= 1 that are not integers: uniform quadrature on the grid
/// used for the next even integer (approximate).
/// Odd integer p is rejected with std::invalid_argument.
double lp_norm(const SpectralField& f, double p);

/// Multiplies the coefficient at n by |n|^sigma.
SpectralField fractional_laplacian(const SpectralField& f, double sigma);

/// Truncated, unprojected advection P_M[(u . grad) v]:
/// coefficient at k is i sum_{k'+k''=k} (u(k') . k'') v(k'').
SpectralField advection(const SpectralField& u, const SpectralField& v);

/// Leray projection of advection(u, v). Equal to the projected, truncated
/// transform of div(v ⊗ u) when u is divergence free; nonlinear_term(u, u)
/// on a divergence-free u is evaluated in that form (fewer transforms).
SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v);

/// L^2 inner product Re sum_n <a(n), b(n)> (normalized measure).
double inner(const SpectralField& a, const SpectralField& b);

/// b(u, v, w) = ∫ ((u . grad) v) . w dx, exact for truncated fields.
double trilinear(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// Samples of f on the physical grid, one vector per component.
std::vector<std::vector<double>> to_physical(const SpectralField& f, int points);

/// Samples of the gradient tensor on the physical grid, entry [i*d + j] = ∂_j f_i.
std::vector<std::vector<double>> gradient_to_physical(const SpectralField& f, int points);

/// Truncated Fourier coefficients of physical samples (one vector per component).
SpectralField from_physical(const GridSpec& grid, const std::vector<std::vector<double>>& values);

/// weight(q) for every shell q = 0..max_shell.
template <class Fn>
std::vector<double> shell_table(const Lattice& lat, Fn&& weight) {
    std::vector<double> table(lat.max_shell + 1);
    for (int q = 0; q <= lat.max_shell; ++q) table[q] = weight(static_cast<double>(q));
    return table;
}

/// Multiplies the coefficient at n by weight(|n|^2), per component.
template <class Fn>
SpectralField apply_radial(const SpectralField& f, Fn&& weight) {
    const Lattice& lat = lattice(f.grid());
    const auto table = shell_table(lat, weight);
    SpectralField out(f);
    for (int c = 0; c < f.components(); ++c) {
        auto comp = out.component(c);
        for (std::size_t i = 0; i < lat.size(); ++i) comp[i] *= table[lat.shell[i]];
    }
    return out;
}

/// sum_n weight(|n|^2) |c(n)|^2 summed over components, skipping n = 0.
template <class Fn>
double radial_energy(const SpectralField& f, Fn&& weight) {
    const Lattice& lat = lattice(f.grid());
    std::vector<double> per_shell(lat.max_shell + 1, 0.0);
    for (int c = 0; c < f.components(); ++c) {
        auto comp = f.component(c);
        for (std::size_t i = 0; i < lat.size(); ++i) per_shell[lat.shell[i]] += std::norm(comp[i]);
    }
    double acc = 0.0;
    for (int q = 1; q <= lat.max_shell; ++q) {
        if (per_shell[q] != 0.0) acc += weight(static_cast<double>(q)) * per_shell[q];
    }
    return acc;
}

}  // namespace randns
