#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace aggnet {

// Philox4x32-10 counter-based generator (standard multipliers and key
// schedule). A (seed, stream) pair selects an independent substream and the
// 128-bit block counter indexes into it, so parallel workers draw from
// disjoint substreams without shared state and replays are exact.
//
// Integer draws use rejection sampling and are therefore bit-identical across
// platforms; network sampling relies on that. Gaussian draws go through libm
// and are only guaranteed stable per platform.
class Philox {
public:
    Philox(uint64_t seed, uint64_t stream)
        : key0_(uint32_t(seed)), key1_(uint32_t(seed >> 32)), stream_(stream) {}

    uint32_t next_u32() {
        if (pos_ == 4) {
            out_ = gen_block();
            pos_ = 0;
            ++block_;
        }
        return out_[pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // uniform on [0,1), 53 bits
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // unbiased uniform integer in [0, bound), bound >= 1
    uint32_t below(uint32_t bound) {
        uint32_t lim = uint32_t(-bound) % bound;
        for (;;) {
            uint32_t x = next_u32();
            if (x >= lim)
                return x % bound;
        }
    }

    // standard normal via Box-Muller, second value cached
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = (double(next_u64() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        double u2 = next_double();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.28318530717958647692528676655900577 * u2;
        cached_ = rad * std::sin(ang);
        have_cached_ = true;
        return rad * std::cos(ang);
    }

private:
    static void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
        uint64_t p = uint64_t(a) * b;
        hi = uint32_t(p >> 32);
        lo = uint32_t(p);
    }

    std::array<uint32_t, 4> gen_block() const {
        uint32_t c0 = uint32_t(block_), c1 = uint32_t(block_ >> 32);
        uint32_t c2 = uint32_t(stream_), c3 = uint32_t(stream_ >> 32);
        uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, c0, hi0, lo0);
            mulhilo(0xCD9E8D57u, c2, hi1, lo1);
            uint32_t n0 = hi1 ^ c1 ^ k0;
            uint32_t n1 = lo1;
            uint32_t n2 = hi0 ^ c3 ^ k1;
            uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {c0, c1, c2, c3};
    }

    uint32_t key0_, key1_;
    uint64_t stream_ = 0;
    uint64_t block_ = 0;
    std::array<uint32_t, 4> out_{};
    int pos_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Uniformly random size-d subset of {1,...,m}, returned ascending.
// Partial Fisher-Yates over the index pool; consumes rng deterministically.
inline std::vector<int> sample_subset(Philox& rng, int m, int d) {
    std::vector<int> pool(m);
    for (int i = 0; i < m; ++i)
        pool[i] = i + 1;
    for (int i = 0; i < d; ++i) {
        int j = i + int(rng.below(uint32_t(m - i)));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + d);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace aggnet
