#pragma once

#include <cstdint>
#include <random>

namespace wavemaps {

// Stream contract, reproducible in any language:
//   state seed = splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15))
//   engine     = mt19937_64 seeded with that single 64-bit value
//   uniform    = (next() >> 11 + 1) * 2^-53, in (0, 1]
//   normal     = Box-Muller, cosine branch first, sine branch cached
std::uint64_t splitmix64(std::uint64_t x);

enum class Stream : std::uint64_t { path = 0, velocity = 1, aux = 2 };

std::uint64_t stream_id(Stream tag, std::uint64_t component);

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace wavemaps
