#pragma once

#include <cstdint>

#include "fracnet/math.hpp"

namespace fracnet {

/// Counter-based random streams. Every variate is a pure function of
/// (seed, stream, step, lane), so the same path is produced regardless
/// of how a batch is partitioned across workers.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t step, std::uint64_t lane) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ step);
    h = splitmix64(h ^ lane);
    return h;
}

/// Uniform in the open interval (0,1). 52 bits keep the endpoint values
/// representable, so the result never rounds onto 0 or 1.
inline double uniform(std::uint64_t k) {
    return (static_cast<double>(k >> 12) + 0.5) * 0x1.0p-52;
}

inline double normal(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t step, std::uint64_t lane) {
    return inv_norm_cdf(uniform(key(seed, stream, step, lane)));
}

/// Sequential stream view for places that just need "some" seeded draws
/// (bootstrap resampling). Still counter-based underneath.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() { return key(seed_, stream_, counter_++, 0); }
    double next_uniform() { return uniform(next_u64()); }
    std::uint64_t next_index(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace rng
}  // namespace fracnet
