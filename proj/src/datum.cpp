#include "randns/datum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "randns/rng.hpp"
#include "randns/spectral.hpp"

namespace randns {

SpectralField single_pair(const GridSpec& grid, const Wavevector& n, int component,
                          double amplitude) {
    const Lattice& lat = lattice(grid);
    const std::size_t idx = lat.index_of(n);
    if (idx == lat.center) throw std::invalid_argument("single_pair: n must be nonzero");
    if (component < 0 || component >= grid.dim) throw std::out_of_range("single_pair: component");
    SpectralField f(grid);
    f.at(component, idx) = amplitude;
    f.at(component, lat.mirror(idx)) = amplitude;
    f.set_divergence_free(n[component] == 0);
    return f;
}

SpectralField sample_function(const GridSpec& grid,
                              const std::function<void(const double* x, double* u)>& fn) {
    const int d = grid.dim;
    const int N = fft_friendly_size(2 * grid.M + 2);
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(N);
    std::vector<std::vector<double>> vals(d, std::vector<double>(total));
    const double h = 2.0 * std::numbers::pi / N;
    double x[3] = {0, 0, 0};
    double u[3] = {0, 0, 0};
    for (std::size_t p = 0; p < total; ++p) {
        std::size_t rem = p;
        for (int j = d - 1; j >= 0; --j) {
            x[j] = h * static_cast<double>(rem % static_cast<std::size_t>(N));
            rem /= static_cast<std::size_t>(N);
        }
        fn(x, u);
        for (int c = 0; c < d; ++c) vals[c][p] = u[c];
    }
    return from_physical(grid, vals);
}

SpectralField taylor_green(const GridSpec& grid, double amplitude) {
    if (grid.dim != 2) throw std::invalid_argument("taylor_green: requires d = 2");
    auto f = sample_function(grid, [amplitude](const double* x, double* u) {
        u[0] = amplitude * std::sin(x[0]) * std::cos(x[1]);
        u[1] = -amplitude * std::cos(x[0]) * std::sin(x[1]);
    });
    f.set_divergence_free(true);
    return f;
}

SpectralField abc_flow(const GridSpec& grid, double A, double B, double C) {
    if (grid.dim != 3) throw std::invalid_argument("abc_flow: requires d = 3");
    auto f = sample_function(grid, [=](const double* x, double* u) {
        u[0] = A * std::sin(x[2]) + C * std::cos(x[1]);
        u[1] = B * std::sin(x[0]) + A * std::cos(x[2]);
        u[2] = C * std::sin(x[1]) + B * std::cos(x[0]);
    });
    f.set_divergence_free(true);
    return f;
}

SpectralField rough_datum(const GridSpec& grid, double decay, std::uint64_t seed,
                          double amplitude) {
    const Lattice& lat = lattice(grid);
    const int d = grid.dim;
    SpectralField f(grid);
    for (std::size_t i = lat.center + 1; i < lat.size(); ++i) {
        const std::uint64_t code = site_code(lat.n[i], d);
        const double scale = amplitude * std::pow(1.0 + lat.norm2[i], 0.5 * decay) / std::sqrt(2.0);
        for (int c = 0; c < d; ++c) {
            auto z = standard_normal_pair(draw_words(seed, Stream::Datum, static_cast<std::uint64_t>(c), code));
            const cplx v{scale * z[0], scale * z[1]};
            f.at(c, i) = v;
            f.at(c, lat.mirror(i)) = std::conj(v);
        }
    }
    return leray_project(f);
}

}  // namespace randns
