#include "cae/rng.hpp"

namespace cae {

double Rng::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

long Rng::uniform_int(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(engine_);
}

double Rng::normal() {
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

std::uint64_t Rng::split() {
    // splitmix64 finalizer over the next raw draw keeps child streams decorrelated
    std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace cae
