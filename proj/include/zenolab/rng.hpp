#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Stream rule used by the Monte Carlo code: key = (seed low word, seed high word),
// counter = (step, trajectory low word, trajectory high word, 0). Every
// (seed, trajectory, step) triple therefore owns an independent block of four
// 32-bit words, regardless of evaluation order or thread layout.

#include <array>
#include <cstdint>

namespace zenolab {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
    explicit Philox4x32(Key key) : key_(key) {}

    Counter operator()(Counter ctr) const {
        Key k = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += kWeyl0;
                k[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    // Uniform double in [0, 1) with 53 random bits from words 0 and 1.
    double uniform(std::uint64_t step, std::uint64_t trajectory) const {
        const Counter out = (*this)({static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(trajectory),
                                     static_cast<std::uint32_t>(trajectory >> 32), 0u});
        const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 21) ^ (out[1] >> 11);
        return static_cast<double>(bits & ((std::uint64_t{1} << 53) - 1)) * 0x1.0p-53;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    Key key_;
};

} // namespace zenolab
