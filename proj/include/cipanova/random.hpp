#pragma once

#include <cstdint>
#include <random>

namespace cipanova {

/// Seeded random source.
///
/// The integer stream is std::mt19937_64, whose output the standard fixes
/// bit for bit. The engine seed is SplitMix64-mixed from (seed, stream), so
/// distinct streams of one seed are decorrelated. Real-valued draws are
/// converted here instead of through <random> distributions, whose algorithms
/// vary between standard libraries.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    /// Independent source keyed by (seed, stream, key). Does not advance *this.
    [[nodiscard]] RandomSource derive(std::uint64_t key) const;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal (Box–Muller, second variate cached).
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace cipanova
