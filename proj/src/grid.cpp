#include "randns/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace randns {

GridSpec::GridSpec(int d, int m, double pad) : dim(d), M(m), pad_factor(pad) { validate(); }

void GridSpec::validate() const {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dim));
    }
    if (M < 1) throw std::invalid_argument("truncation radius M must be >= 1");
    if (!(pad_factor >= 1.0)) throw std::invalid_argument("pad_factor must be >= 1");
}

std::size_t GridSpec::modes() const {
    std::size_t s = static_cast<std::size_t>(side());
    std::size_t r = 1;
    for (int j = 0; j < dim; ++j) r *= s;
    return r;
}

int GridSpec::product_points() const { return fft_friendly_size(3 * M + 2); }

int GridSpec::lp_points(int p) const { return fft_friendly_size(p * M + 2); }

int GridSpec::sup_points() const {
    return fft_friendly_size(static_cast<int>(std::ceil(pad_factor * side())));
}

int fft_friendly_size(int n) {
    if (n < 2) n = 2;
    for (int c = n + (n & 1);; c += 2) {
        int r = c;
        for (int f : {2, 3, 5, 7}) {
            while (r % f == 0) r /= f;
        }
        if (r == 1) return c;
    }
}

std::size_t Lattice::index_of(const Wavevector& v) const {
    std::size_t idx = 0;
    const std::size_t s = static_cast<std::size_t>(2 * M + 1);
    for (int j = 0; j < dim; ++j) {
        if (v[j] < -M || v[j] > M) throw std::out_of_range("wavevector outside the truncated lattice");
        idx = idx * s + static_cast<std::size_t>(v[j] + M);
    }
    return idx;
}

namespace {

std::unique_ptr<Lattice> build_lattice(int dim, int M) {
    auto lat = std::make_unique<Lattice>();
    lat->dim = dim;
    lat->M = M;
    const int s = 2 * M + 1;
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(s);
    lat->n.resize(total);
    lat->norm2.resize(total);
    lat->shell.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Wavevector v{0, 0, 0};
        std::size_t rem = idx;
        for (int j = dim - 1; j >= 0; --j) {
            v[j] = static_cast<int>(rem % static_cast<std::size_t>(s)) - M;
            rem /= static_cast<std::size_t>(s);
        }
        lat->n[idx] = v;
        double q = 0.0;
        for (int j = 0; j < dim; ++j) q += static_cast<double>(v[j]) * v[j];
        lat->norm2[idx] = q;
        lat->shell[idx] = static_cast<int>(q);
    }
    lat->max_shell = dim * M * M;
    lat->center = (total - 1) / 2;
    return lat;
}

}  // namespace

const Lattice& lattice(const GridSpec& grid) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Lattice>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(grid.dim, grid.M);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_lattice(grid.dim, grid.M)).first;
    return *it->second;
}

std::uint64_t site_code(const Wavevector& v, int dim) {
    constexpr std::int64_t kOffset = 1 << 20;
    std::uint64_t code = 0;
    for (int j = 0; j < dim; ++j) {
        code |= static_cast<std::uint64_t>(v[j] + kOffset) << (21 * j);
    }
    return code;
}

}  // namespace randns
