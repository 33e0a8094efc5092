#pragma once

#include <cstdint>

namespace hofa {

// splitmix64 step: used to seed and to derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// A fresh master seed derived from (seed, id): lets an orchestrator hand
// nested samplers disjoint randomness without coordinating stream ids.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id)
{
    std::uint64_t s = seed ^ (id * 0xD1342543DE82EF95ull);
    return splitmix64(s);
}

// xoshiro256** generator, written out so the byte stream is identical across
// standard libraries and platforms. std::mt19937_64 would serve, but the std
// distributions are implementation-defined and we promise bit-stable output
// for a given seed, so both the generator and the sampling are pinned here.
class Rng {
public:
    explicit Rng(std::uint64_t seed)
    {
        std::uint64_t s = seed;
        for (auto& word : state_)
            word = splitmix64(s);
    }

    // Stream `id` of a master seed: decorrelated generators whose draws do
    // not depend on how work is partitioned across threads or batches.
    static Rng stream(std::uint64_t seed, std::uint64_t id)
    {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = id ^ 0xA3EC647659359ACDull;
        std::uint64_t b = splitmix64(s);
        return Rng(a ^ (b * 0xD1342543DE82EF95ull));
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased uniform draw from [0, n) by rejection.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold)
                return x % n;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double real(double lo, double hi) { return lo + (hi - lo) * real01(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace hofa
