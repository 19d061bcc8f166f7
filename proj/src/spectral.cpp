#include "randns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "randns/errors.hpp"

namespace randns {

namespace {

double radial_energy_mean(const SpectralField& f) {
    const std::size_t center = lattice(f.grid()).center;
    double acc = 0.0;
    for (int c = 0; c < f.components(); ++c) acc += std::norm(f.at(c, center));
    return acc;
}

}  // namespace

SpectralField leray_project(const SpectralField& f) {
    const Lattice& lat = lattice(f.grid());
    const int d = f.components();
    SpectralField out(f);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == lat.center) {
            for (int c = 0; c < d; ++c) out.at(c, i) = 0.0;
            continue;
        }
        const Wavevector& n = lat.n[i];
        cplx dot{0.0, 0.0};
        for (int c = 0; c < d; ++c) dot += static_cast<double>(n[c]) * f.at(c, i);
        const cplx t = dot / lat.norm2[i];
        for (int c = 0; c < d; ++c) out.at(c, i) = f.at(c, i) - static_cast<double>(n[c]) * t;
    }
    out.set_divergence_free(true);
    return out;
}

double sobolev_norm(const SpectralField& f, double s) {
    const double mean = radial_energy_mean(f);
    return std::sqrt(mean + radial_energy(f, [s](double q) { return std::pow(1.0 + q, s); }));
}

double homogeneous_norm(const SpectralField& f, double s) {
    if (s == 0.0) return std::sqrt(radial_energy(f, [](double) { return 1.0; }));
    if (s == 1.0) return std::sqrt(radial_energy(f, [](double q) { return q; }));
    if (s == 0.5) return std::sqrt(radial_energy(f, [](double q) { return std::sqrt(q); }));
    if (s == 1.5) return std::sqrt(radial_energy(f, [](double q) { return q * std::sqrt(q); }));
    return std::sqrt(radial_energy(f, [s](double q) { return std::pow(q, s); }));
}

std::vector<std::vector<double>> to_physical(const SpectralField& f, int points) {
    const Lattice& lat = lattice(f.grid());
    PhysicalGrid pg(f.grid().dim, points);
    std::vector<std::vector<double>> out(f.components(), std::vector<double>(pg.size()));
    for (int c = 0; c < f.components(); ++c) pg.synthesize(f.component(c), lat, out[c]);
    return out;
}

std::vector<std::vector<double>> gradient_to_physical(const SpectralField& f, int points) {
    const Lattice& lat = lattice(f.grid());
    const int d = f.components();
    PhysicalGrid pg(d, points);
    std::vector<std::vector<double>> out(d * d, std::vector<double>(pg.size()));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) pg.synthesize(f.component(i), lat, out[i * d + j], j);
    }
    return out;
}

SpectralField from_physical(const GridSpec& grid, const std::vector<std::vector<double>>& values) {
    if (static_cast<int>(values.size()) != grid.dim) {
        throw std::invalid_argument("from_physical: expected one sample vector per component");
    }
    std::size_t total = values[0].size();
    int points = static_cast<int>(std::lround(std::pow(static_cast<double>(total), 1.0 / grid.dim)));
    PhysicalGrid pg(grid.dim, points);
    if (pg.size() != total) throw std::invalid_argument("from_physical: sample count is not N^d");
    const Lattice& lat = lattice(grid);
    SpectralField out(grid);
    for (int c = 0; c < grid.dim; ++c) {
        pg.analyze(values[c], lat, out.component(c));
        out.at(c, lat.center) = 0.0;
    }
    return out;
}

namespace {

double lp_on_grid(const SpectralField& f, int points, double p) {
    auto vals = to_physical(f, points);
    const std::size_t n = vals[0].size();
    const bool sup = std::isinf(p);
    const bool even = !sup && p == std::floor(p) && static_cast<long>(p) % 2 == 0;
    double acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double m2 = 0.0;
        for (const auto& comp : vals) m2 += comp[x] * comp[x];
        if (sup) {
            acc = std::max(acc, m2);
        } else if (even) {
            double r = 1.0;
            for (long k = 0; k < static_cast<long>(p) / 2; ++k) r *= m2;
            acc += r;
        } else {
            acc += std::pow(m2, 0.5 * p);
        }
    }
    if (sup) return std::sqrt(acc);
    return std::pow(acc / static_cast<double>(n), 1.0 / p);
}

}  // namespace

double lp_norm(const SpectralField& f, double p) {
    if (std::isinf(p)) return lp_on_grid(f, f.grid().sup_points(), p);
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (p == std::floor(p)) {
        const long ip = static_cast<long>(p);
        if (ip % 2 != 0) {
            throw std::invalid_argument("lp_norm: odd exponent p=" + std::to_string(ip) +
                                        " has no exact quadrature; use an even p or infinity");
        }
        return lp_on_grid(f, f.grid().lp_points(static_cast<int>(ip)), p);
    }
    int even = static_cast<int>(std::ceil(p));
    if (even % 2) ++even;
    return lp_on_grid(f, f.grid().lp_points(even), p);
}

SpectralField fractional_laplacian(const SpectralField& f, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("fractional_laplacian: sigma must be >= 0");
    const double half = 0.5 * sigma;
    return apply_radial(f, [half](double q) { return q == 0.0 ? 0.0 : std::pow(q, half); });
}

SpectralField advection(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u, v, "advection");
    const GridSpec& grid = u.grid();
    const Lattice& lat = lattice(grid);
    const int d = grid.dim;
    PhysicalGrid pg(d, grid.product_points());
    const std::size_t np = pg.size();

    std::vector<std::vector<double>> uu(d, std::vector<double>(np));
    for (int j = 0; j < d; ++j) pg.synthesize(u.component(j), lat, uu[j]);

    SpectralField out(grid);
    std::vector<double> grad(np), acc(np);
    for (int i = 0; i < d; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < d; ++j) {
            pg.synthesize(v.component(i), lat, grad, j);
            const auto& uj = uu[j];
            for (std::size_t x = 0; x < np; ++x) acc[x] += uj[x] * grad[x];
        }
        pg.analyze(acc, lat, out.component(i));
        out.at(i, lat.center) = 0.0;
    }
    return out;
}

namespace {

// P_M div(u ⊗ u), equal to P_M (u.grad)u when div u = 0.
SpectralField conservative_self_advection(const SpectralField& u) {
    const GridSpec& grid = u.grid();
    const Lattice& lat = lattice(grid);
    const int d = grid.dim;
    PhysicalGrid pg(d, grid.product_points());
    const std::size_t np = pg.size();
    std::vector<std::vector<double>> uu(d, std::vector<double>(np));
    for (int j = 0; j < d; ++j) pg.synthesize(u.component(j), lat, uu[j]);

    SpectralField out(grid);
    std::vector<double> prod(np);
    std::vector<cplx> t(lat.size());
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            for (std::size_t x = 0; x < np; ++x) prod[x] = uu[i][x] * uu[j][x];
            pg.analyze(prod, lat, t);
            for (std::size_t k = 0; k < lat.size(); ++k) {
                const cplx a = cplx{0.0, 1.0} * t[k];
                out.at(i, k) += static_cast<double>(lat.n[k][j]) * a;
                if (j != i) out.at(j, k) += static_cast<double>(lat.n[k][i]) * a;
            }
        }
    }
    for (int i = 0; i < d; ++i) out.at(i, lat.center) = 0.0;
    return out;
}

}  // namespace

SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v) {
    if (&u == &v && (u.divergence_free() || u.divergence_defect() <= 1e-12)) return leray_project(conservative_self_advection(u));
    return leray_project(advection(u, v));
}

double inner(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b, "inner");
    double acc = 0.0;
    auto ca = a.coeffs();
    auto cb = b.coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        acc += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
    }
    return acc;
}

double trilinear(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    return inner(advection(u, v), w);
}

}  // namespace randns
