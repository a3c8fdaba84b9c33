#pragma once

#include <cstdint>

namespace cfpath {

/// splitmix64 stream. All generator randomness flows through this type so a
/// seed reproduces the same maps on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1): the top 53 bits of next() scaled by 2^-53.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// True with probability p (p <= 0 never, p >= 1 always).
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform integer in [0, n), rejection-sampled so it is unbiased. n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
    int range(int lo, int hi) noexcept {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Standard normal via Box-Muller (one uniform pair per draw, cosine branch).
    double normal() noexcept;

    /// Gamma(shape, 1) via Marsaglia-Tsang; shapes below 1 use the
    /// U^(1/shape) boost of Gamma(shape + 1).
    double gamma(double shape) noexcept;

    /// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
    double beta(double a, double b) noexcept;

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

} // namespace cfpath
