#include "randns/rng.hpp"

#include <cmath>
#include <numbers>

namespace randns {

std::array<std::uint64_t, 2> draw_words(std::uint64_t seed, Stream stream, std::uint64_t sample,
                                        std::uint64_t site) {
    Philox4x32 gen(seed);
    // sample is limited to 48 bits; the top 16 bits of the counter carry the stream tag.
    const std::uint64_t hi = (sample & 0xFFFFFFFFFFFFull) | (std::uint64_t{static_cast<std::uint16_t>(stream)} << 48);
    auto out = gen({static_cast<std::uint32_t>(site), static_cast<std::uint32_t>(site >> 32),
                    static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)});
    return {(std::uint64_t{out[0]} << 32) | out[1], (std::uint64_t{out[2]} << 32) | out[3]};
}

std::array<double, 2> standard_normal_pair(const std::array<std::uint64_t, 2>& words) {
    const double u1 = to_unit_open0(words[0]);
    const double u2 = to_unit_open0(words[1]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

double standard_normal(const std::array<std::uint64_t, 2>& words) {
    return standard_normal_pair(words)[0];
}

}  // namespace randns
