#pragma once

#include <cstdint>
#include <random>

namespace crs {

/// Deterministic 64-bit random stream.
///
/// Streams are split from a root seed by index, so stream k of seed s is the
/// same sequence on every platform and for every worker count. Variates are
/// produced by explicit algorithms rather than <random> distributions, whose
/// output is implementation-defined.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal (Marsaglia polar method).
    double normal();

    /// Gamma(shape, 1); valid for every shape > 0.
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer, used to derive well-mixed substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace crs
