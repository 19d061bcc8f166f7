#pragma once

#include <array>
#include <cstdint>

namespace randns {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A draw is a pure function of (key, counter); there is no sequential
/// state, so values do not depend on evaluation order or thread layout.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t key)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

    Counter operator()(Counter ctr) const {
        std::array<std::uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    std::array<std::uint32_t, 2> key_;
};

/// Stream tags keep unrelated uses of the same seed apart.
enum class Stream : std::uint16_t { Multiplier = 0, Datum = 1, Moment = 2, Perturbation = 3 };

/// Two 64-bit words addressed by (seed, stream, sample, site).
std::array<std::uint64_t, 2> draw_words(std::uint64_t seed, Stream stream, std::uint64_t sample,
                                        std::uint64_t site);

/// Uniform in (0, 1], 53 bits.
inline double to_unit_open0(std::uint64_t w) {
    return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on the two words of one draw.
double standard_normal(const std::array<std::uint64_t, 2>& words);

/// Two independent standard normals from one draw (both Box-Muller outputs).
std::array<double, 2> standard_normal_pair(const std::array<std::uint64_t, 2>& words);

}  // namespace randns
