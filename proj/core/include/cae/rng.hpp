#ifndef CAE_RNG_HPP
#define CAE_RNG_HPP

#include <cstdint>
#include <random>

namespace cae {

/// Seeded random source. All stochastic operations in the library draw from
/// an explicit Rng so that runs are reproducible bit-for-bit for a seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [lo, hi], both ends inclusive.
    long uniform_int(long lo, long hi);

    /// Standard normal draw.
    double normal();

    /// Derive an independent child seed (use for per-fold / per-worker streams).
    std::uint64_t split();

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace cae

#endif
