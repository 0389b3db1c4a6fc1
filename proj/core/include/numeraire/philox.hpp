#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace numeraire {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter c, Key k) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += kW0;
                k[1] += kW1;
            }
            const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        }
        return c;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Standard normals addressed by (seed, path, dimension): the same triple always
/// yields the same value, whatever order or thread asks for it.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path) : seed_(seed), path_(path) {}

    /// Normals 2 block and 2 block + 1 from one Box-Muller transform.
    [[nodiscard]] std::array<double, 2> pair(std::uint32_t block) const {
        const auto out = Philox4x32::generate(
            {static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32), block, 0u},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        const double u1 = to_unit(out[0], out[1]);
        const double u2 = to_unit(out[2], out[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    [[nodiscard]] double operator()(std::uint32_t dimension) const {
        return pair(dimension / 2)[dimension % 2];
    }

private:
    // 53 random bits mapped to the open interval (0, 1).
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t path_;
};

}  // namespace numeraire
