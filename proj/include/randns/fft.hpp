#pragma once

#include <span>

#include "randns/field.hpp"

namespace randns {

/// Uniform physical grid with N points per axis on [0, 2π)^d and the real
/// transforms between it and a truncated Fourier lattice.
///
/// Backed by FFTW real-to-complex plans, one per (d, N), created once under
/// a lock and shared. Execution uses per-thread buffers, so a PhysicalGrid
/// can be used concurrently and always produces the same bits for the
/// same input.
class PhysicalGrid {
public:
    PhysicalGrid(int dim, int points);

    int dim() const { return dim_; }
    int points() const { return points_; }
    std::size_t size() const { return size_; }

    /// out(x) = sum_n factor(n) c(n) e^{i n.x} where factor is i n_axis when
    /// axis >= 0 (otherwise 1), times weight[n] when a weight is given.
    /// Requires points >= 2M+1.
    void synthesize(std::span<const cplx> coeffs, const Lattice& lat, std::span<double> out,
                    int axis = -1, std::span<const double> weight = {}) const;

    /// Fourier coefficients of the grid function, truncated to the lattice.
    /// The result is made exactly Hermitian by reading each canonical mode
    /// and mirroring it.
    void analyze(std::span<const double> values, const Lattice& lat, std::span<cplx> out) const;

private:
    int dim_;
    int points_;
    std::size_t size_;
    std::size_t half_size_;
    void* plans_;  // owned by the global plan cache
};

}  // namespace randns
