#include "randns/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace randns {

namespace {

template <class T>
T to_le(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& os, T v) {
    v = to_le(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
        throw std::runtime_error("SNSF checkpoint truncated");
    }
    return to_le(v);
}

}  // namespace

void write_checkpoint(std::ostream& os, const SpectralField& f) {
    os.write("SNSF", 4);
    put<std::uint32_t>(os, kCheckpointVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().M));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.components()));
    for (const cplx& c : f.coeffs()) {
        put<double>(os, c.real());
        put<double>(os, c.imag());
    }
    if (!os) throw std::runtime_error("SNSF checkpoint write failed");
}

void write_checkpoint(const std::filesystem::path& path, const SpectralField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_checkpoint(os, f);
}

SpectralField read_checkpoint(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "SNSF", 4) != 0) {
        throw std::runtime_error("not an SNSF checkpoint (bad magic)");
    }
    const auto version = get<std::uint32_t>(is);
    if (version != kCheckpointVersion) {
        throw std::runtime_error("unsupported SNSF version " + std::to_string(version));
    }
    const auto d = get<std::uint32_t>(is);
    const auto M = get<std::uint32_t>(is);
    const auto comps = get<std::uint32_t>(is);
    if (comps != d) throw std::runtime_error("SNSF component count must equal dimension");
    GridSpec grid(static_cast<int>(d), static_cast<int>(M));
    std::vector<cplx> coeffs(grid.size());
    for (auto& c : coeffs) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        c = cplx{re, im};
    }
    SpectralField f(grid, std::move(coeffs));
    f.set_divergence_free(f.divergence_defect() <= 1e-12);
    return f;
}

SpectralField read_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_checkpoint(is);
}

}  // namespace randns
