#pragma once

#include <cstdint>

namespace catlad {

// One step of the SplitMix64 sequence: advance the state by the golden-ratio
// increment and return the mixed output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// First SplitMix64 output for a given starting state. Used to derive
// per-replication seeds from (master_seed + replication_index).
inline std::uint64_t splitmix64(std::uint64_t state) {
    return splitmix64_next(state);
}

// xoshiro256++ keyed by (seed, stream_id). The four state words are filled
// from a SplitMix64 sequence whose start is an avalanche mix of both keys, so
// distinct stream ids give unrelated streams under the same seed. Each stream
// is owned by a single thread; replicas built from equal keys produce
// identical draw sequences on any platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t key = splitmix64(seed) ^ splitmix64(0x6A09E667F3BCC909ULL ^ stream_id);
        for (auto& word : s_) word = splitmix64_next(key);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1); safe under log and reciprocal.
    double u01_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t s_[4];
};

}  // namespace catlad
