#pragma once

#include <cstdint>

namespace gradcode {

// Counter-based generator: every draw is a hash of (seed, stream, counter), so
// identical keys give identical draws on any platform and parallel streams
// never share state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// In (0, 1]; never 0, so log(u) is safe.
inline double u01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

struct StreamRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    std::uint64_t next() { return hash3(seed, stream, counter++); }
    double next_u01() { return u01(next()); }
};

}  // namespace gradcode
