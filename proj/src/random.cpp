#include "cipanova/random.hpp"

#include <cmath>
#include <numbers>

namespace cipanova {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

RandomSource RandomSource::derive(std::uint64_t key) const {
    return RandomSource(seed_, splitmix64(stream_ * 0x9E3779B97F4A7C15ULL + splitmix64(key)));
}

double RandomSource::uniform() {
    // 53 random bits, shifted half an ulp off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace cipanova
