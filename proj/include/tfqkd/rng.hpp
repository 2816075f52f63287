#ifndef TFQKD_RNG_HPP
#define TFQKD_RNG_HPP

#include <cstdint>

// Small deterministic PRNG (xoshiro256** seeded through splitmix64).
// Invariant across platforms and standard-library versions, so seeded runs
// are byte-identical everywhere. Independent logical streams are derived by
// seeding with (seed, stream_index).

namespace tfqkd {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ull * (stream + 1));
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform double in [0, 1)
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        // threshold comparison on the raw 53-bit mantissa draw
        return next_double() < p;
    }

    // standard normal via Box-Muller (two uniforms per call, no caching so
    // the stream position is deterministic)
    double next_gaussian();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

} // namespace tfqkd

#endif
