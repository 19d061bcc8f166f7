#include "randns/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace randns {

namespace {

struct Plans {
    fftw_plan c2r = nullptr;
    fftw_plan r2c = nullptr;
};

std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

struct Buffers {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    Buffers(std::size_t n_real, std::size_t n_spec) {
        real = fftw_alloc_real(n_real);
        spec = fftw_alloc_complex(n_spec);
    }
    ~Buffers() {
        fftw_free(real);
        fftw_free(spec);
    }
    Buffers(const Buffers&) = delete;
    Buffers& operator=(const Buffers&) = delete;
};

Plans* get_plans(int dim, int n) {
    static std::map<std::pair<int, int>, std::unique_ptr<Plans>> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto key = std::make_pair(dim, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.get();

    int dims[3] = {n, n, n};
    std::size_t real_size = 1;
    for (int j = 0; j < dim; ++j) real_size *= static_cast<std::size_t>(n);
    const std::size_t spec_size = real_size / static_cast<std::size_t>(n) * (n / 2 + 1);
    Buffers scratch(real_size, spec_size);
    auto plans = std::make_unique<Plans>();
    plans->c2r = fftw_plan_dft_c2r(dim, dims, scratch.spec, scratch.real, FFTW_ESTIMATE);
    plans->r2c = fftw_plan_dft_r2c(dim, dims, scratch.real, scratch.spec, FFTW_ESTIMATE);
    if (!plans->c2r || !plans->r2c) throw std::runtime_error("FFTW planning failed");
    return cache.emplace(key, std::move(plans)).first->second.get();
}

Buffers& thread_buffers(int dim, int n, std::size_t real_size, std::size_t spec_size) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<Buffers>> local;
    auto key = std::make_pair(dim, n);
    auto it = local.find(key);
    if (it == local.end()) {
        it = local.emplace(key, std::make_unique<Buffers>(real_size, spec_size)).first;
    }
    return *it->second;
}

inline std::size_t wrap(int v, int n) { return static_cast<std::size_t>(v < 0 ? v + n : v); }

// Offset of lattice mode v (with v[dim-1] >= 0) in the half-complex array.
inline std::size_t half_offset(const Wavevector& v, int dim, int n) {
    const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
    std::size_t off = 0;
    for (int j = 0; j < dim - 1; ++j) off = off * static_cast<std::size_t>(n) + wrap(v[j], n);
    return off * half + static_cast<std::size_t>(v[dim - 1]);
}

}  // namespace

PhysicalGrid::PhysicalGrid(int dim, int points) : dim_(dim), points_(points) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("PhysicalGrid: dim must be 2 or 3");
    if (points < 2 || points % 2 != 0) {
        throw std::invalid_argument("PhysicalGrid: points must be even and >= 2");
    }
    size_ = 1;
    for (int j = 0; j < dim; ++j) size_ *= static_cast<std::size_t>(points);
    half_size_ = size_ / static_cast<std::size_t>(points) * (points / 2 + 1);
    plans_ = get_plans(dim, points);
}

void PhysicalGrid::synthesize(std::span<const cplx> coeffs, const Lattice& lat,
                              std::span<double> out, int axis,
                              std::span<const double> weight) const {
    if (lat.dim != dim_) throw std::invalid_argument("synthesize: lattice dimension mismatch");
    if (points_ < 2 * lat.M + 1) throw std::invalid_argument("synthesize: grid too coarse");
    if (out.size() != size_) throw std::invalid_argument("synthesize: output size mismatch");
    auto* plans = static_cast<Plans*>(plans_);
    Buffers& buf = thread_buffers(dim_, points_, size_, half_size_);
    std::memset(buf.spec, 0, sizeof(fftw_complex) * half_size_);
    const bool weighted = !weight.empty();
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const Wavevector& v = lat.n[i];
        if (v[dim_ - 1] < 0) continue;
        cplx c = coeffs[i];
        if (axis >= 0) c *= cplx{0.0, static_cast<double>(v[axis])};
        if (weighted) c *= weight[i];
        const std::size_t off = half_offset(v, dim_, points_);
        buf.spec[off][0] = c.real();
        buf.spec[off][1] = c.imag();
    }
    fftw_execute_dft_c2r(plans->c2r, buf.spec, buf.real);
    std::copy(buf.real, buf.real + size_, out.begin());
}

void PhysicalGrid::analyze(std::span<const double> values, const Lattice& lat,
                           std::span<cplx> out) const {
    if (lat.dim != dim_) throw std::invalid_argument("analyze: lattice dimension mismatch");
    if (points_ < 2 * lat.M + 1) throw std::invalid_argument("analyze: grid too coarse");
    if (values.size() != size_) throw std::invalid_argument("analyze: input size mismatch");
    auto* plans = static_cast<Plans*>(plans_);
    Buffers& buf = thread_buffers(dim_, points_, size_, half_size_);
    std::copy(values.begin(), values.end(), buf.real);
    fftw_execute_dft_r2c(plans->r2c, buf.real, buf.spec);
    const double scale = 1.0 / static_cast<double>(size_);
    for (std::size_t i = lat.center; i < lat.size(); ++i) {
        const Wavevector& v = lat.n[i];
        cplx c;
        if (v[dim_ - 1] >= 0) {
            const std::size_t off = half_offset(v, dim_, points_);
            c = cplx{buf.spec[off][0], buf.spec[off][1]} * scale;
        } else {
            Wavevector m{-v[0], -v[1], -v[2]};
            const std::size_t off = half_offset(m, dim_, points_);
            c = std::conj(cplx{buf.spec[off][0], buf.spec[off][1]}) * scale;
        }
        out[i] = c;
        out[lat.mirror(i)] = std::conj(c);
    }
}

}  // namespace randns
