#pragma once

#include <cmath>
#include <cstdint>

namespace morrey {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: draw k of stream s is a pure function of
/// (seed, s, k), so draws never depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t at(std::uint64_t counter) const
    {
        return mix64(mix64(seed_ ^ mix64(stream_ + 0x632be59bd9b4e019ULL)) + counter);
    }

    std::uint64_t next() { return at(counter_++); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    /// exp(U) with U uniform on [lo, hi].
    double log_uniform(double lo, double hi) { return std::exp(uniform(lo, hi)); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace morrey
