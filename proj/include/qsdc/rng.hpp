#pragma once

#include <cstdint>

namespace qsdc {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based random stream keyed by (seed, index).
///
/// Every round of the simulation owns its own stream, so any partition of
/// rounds across workers draws identical values and a single round can be
/// regenerated in isolation.
class RoundRng {
public:
    RoundRng(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t a = seed;
        std::uint64_t b = index ^ 0xD1B54A32D192ED03ULL;
        state_ = detail::splitmix64(a) ^ detail::splitmix64(b);
        (void)next_u64();  // decouple the first output from the key xor
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t state_;
};

}  // namespace qsdc
