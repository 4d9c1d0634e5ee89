#pragma once

#include <cstdint>

namespace wormcov {

/// splitmix64 finalizer; also used to derive chain seeds.
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    uint64_t state_;
};

/// Seed for chain `chain` of stream `stream` under a master seed:
///   mix64(mix64(master + GOLDEN*(stream+1)) + GOLDEN*(chain+1))
/// with GOLDEN = 0x9e3779b97f4a7c15. Streams separate independent sampling
/// phases; chains within a stream are mutually independent, so ensembles can
/// run in any order or in parallel with reproducible results.
inline uint64_t chain_seed(uint64_t master, uint64_t stream, uint64_t chain) {
    constexpr uint64_t golden = 0x9e3779b97f4a7c15ULL;
    const uint64_t s = mix64(master + golden * (stream + 1));
    return mix64(s + golden * (chain + 1));
}

/// xoshiro256++ (Blackman/Vigna), period 2^256 - 1. State is expanded from
/// the seed with splitmix64, as the authors recommend.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53 random bits; bit-identical across platforms.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in {0,...,n-1}, unbiased (multiply-shift with rejection).
    uint32_t uniform_below(uint32_t n) {
        const uint32_t threshold = static_cast<uint32_t>(0u - n) % n;  // 2^32 mod n
        for (;;) {
            const uint32_t r = static_cast<uint32_t>(next());
            const uint64_t prod = static_cast<uint64_t>(r) * n;
            if (static_cast<uint32_t>(prod) >= threshold)
                return static_cast<uint32_t>(prod >> 32);
        }
    }

    bool coin() { return (next() >> 63) != 0; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace wormcov
