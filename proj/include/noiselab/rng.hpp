#pragma once

#include <cstdint>

#include "noiselab/gaussian.hpp"

namespace noiselab {

// Counter-seeded SplitMix64 stream. The initial state is a pure function of
// (master_seed, stream_index), so stream i can be generated without touching
// streams 0..i-1. That is what makes ensemble runs independent of scheduling:
// path i always consumes exactly its own stream.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream_index)
        : state_(mix(mix(master_seed) + stream_index)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix_output(state_);
    }

    // Uniform on the open interval (0, 1); never returns an endpoint, so the
    // quantile transform below is always defined.
    double next_uniform() {
        const std::uint64_t v = next_u64() >> 11;
        return static_cast<double>(v) * 0x1.0p-53 + 0x1.0p-54;
    }

    double next_normal() { return std_normal_quantile(next_uniform()); }

private:
    static std::uint64_t mix_output(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        return mix_output(z);
    }

    std::uint64_t state_;
};

}  // namespace noiselab
