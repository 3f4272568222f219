#pragma once

#include <cmath>
#include <cstdint>

namespace qsa {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Key = (seed, path index), counter = 128-bit block index: any block of any
/// stream is addressable in O(1), which makes parallel path simulation
/// reproducible regardless of scheduling.
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;

    std::uint32_t key[2];
    std::uint32_t ctr[4];

    static void round(std::uint32_t c[4], const std::uint32_t k[2]) {
        const std::uint64_t p0 = std::uint64_t(M0) * c[0];
        const std::uint64_t p1 = std::uint64_t(M1) * c[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        const std::uint32_t n0 = hi1 ^ c[1] ^ k[0];
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c[3] ^ k[1];
        const std::uint32_t n3 = lo0;
        c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
    }

    /// One 10-round block: 128 bits of output for a given (key, counter).
    static void block(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                      std::uint32_t out[4]) {
        std::uint32_t k[2] = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
        std::uint32_t c[4] = {std::uint32_t(counter), std::uint32_t(counter >> 32),
                              std::uint32_t(stream), std::uint32_t(stream >> 32)};
        for (int r = 0; r < 10; ++r) {
            round(c, k);
            k[0] += W0;
            k[1] += W1;
        }
        out[0] = c[0]; out[1] = c[1]; out[2] = c[2]; out[3] = c[3];
    }
};

/// Per-path Gaussian stream: Philox blocks mapped to N(0,1) pairs by the
/// Box-Muller transform (fixed, rejection-free: counter k maps to draws 2k, 2k+1).
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t path_index)
        : seed_(seed), stream_(path_index) {}

    double next() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        std::uint32_t w[4];
        Philox4x32::block(seed_, stream_, counter_++, w);
        const std::uint64_t a = (std::uint64_t(w[0]) << 32) | w[1];
        const std::uint64_t b = (std::uint64_t(w[2]) << 32) | w[3];
        // u1 in (0,1], u2 in [0,1)
        const double u1 = 1.0 - double(a >> 11) * 0x1p-53;
        const double u2 = double(b >> 11) * 0x1p-53;
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        have_ = true;
        return rad * std::cos(ang);
    }

    /// Uniform in [0,1) from a dedicated block; used by the permutation test.
    double next_uniform() {
        std::uint32_t w[4];
        Philox4x32::block(seed_, stream_, counter_++, w);
        const std::uint64_t a = (std::uint64_t(w[0]) << 32) | w[1];
        return double(a >> 11) * 0x1p-53;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    double spare_ = 0;
    bool have_ = false;
};

} // namespace qsa
