#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace randns {

/// Truncated Fourier lattice on the 2π-periodic torus T^d.
///
/// Modes are the integer vectors n with max_j |n_j| <= M. Physical-space
/// evaluation grids are derived from M: products need at least 3M+2 points
/// per axis for an alias-free truncated convolution, and the L^p quadrature
/// of an even power p needs at least pM+2.
struct GridSpec {
    int dim = 2;
    int M = 8;
    double pad_factor = 4.0;

    GridSpec() = default;
    GridSpec(int d, int m, double pad = 4.0);

    /// Throws std::invalid_argument unless d in {2,3}, M >= 1, pad >= 1.
    void validate() const;

    int side() const { return 2 * M + 1; }
    std::size_t modes() const;  // side()^dim
    std::size_t size() const { return modes() * static_cast<std::size_t>(dim); }

    int product_points() const;
    int lp_points(int p) const;
    int sup_points() const;

    bool operator==(const GridSpec& o) const { return dim == o.dim && M == o.M; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Smallest even integer >= n whose prime factors are all in {2,3,5,7}.
int fft_friendly_size(int n);

using Wavevector = std::array<int, 3>;

/// Precomputed lattice tables for one (dim, M). Entries are in storage order:
/// lexicographic in (n_1, ..., n_d) with n_1 slowest.
struct Lattice {
    int dim = 0;
    int M = 0;
    std::vector<Wavevector> n;
    std::vector<double> norm2;  // |n|^2
    std::vector<int> shell;     // |n|^2 as an integer
    int max_shell = 0;          // d M^2
    std::size_t center = 0;     // index of n = 0

    std::size_t size() const { return n.size(); }
    /// Index of -n. The box is symmetric so this is a reflection of the index.
    std::size_t mirror(std::size_t idx) const { return size() - 1 - idx; }
    /// n is canonical when it is the lexicographically larger of {n, -n}.
    bool canonical(std::size_t idx) const { return idx >= center; }
    std::size_t index_of(const Wavevector& v) const;
};

/// Shared, immutable lattice table (thread-safe cache).
const Lattice& lattice(const GridSpec& grid);

/// Position-independent 63-bit code of a wavevector, used to address random
/// streams so that a site gets the same draw at every truncation level.
std::uint64_t site_code(const Wavevector& v, int dim);

}  // namespace randns
