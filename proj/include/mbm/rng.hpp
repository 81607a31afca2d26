#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace mbm {

// Counter-based generator: output i is a bijective mix of (state0 + i*GAMMA).
// Independent streams are derived by hashing an identifier tuple (for the
// channel simulator, one stream per simulated block) into the starting
// counter, so results do not depend on thread count or scheduling.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t s0 = 0) : state_(s0) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Derive an independent stream from an arbitrary tuple of identifiers.
    static CounterRng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                             std::uint64_t c = 0) {
        std::uint64_t s = mix(seed + GAMMA);
        s = mix(s ^ (a + GAMMA));
        s = mix(s ^ (b + 0x452821E638D01377ull));
        s = mix(s ^ (c + 0xBE5466CF34E90C6Cull));
        return CounterRng(s);
    }

    std::uint64_t next_u64() { return mix(state_ += GAMMA); }

    /// Uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double next_double_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  private:
    static constexpr std::uint64_t GAMMA = 0x9E3779B97F4A7C15ull;
    std::uint64_t state_;
};

/// Standard normal deviates via the polar method, fully specified by CounterRng
/// so that a (seed, stream) pair always yields the same sequence.
class GaussianStream {
  public:
    explicit GaussianStream(CounterRng rng) : rng_(rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * rng_.next_double() - 1.0;
            v = 2.0 * rng_.next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Circularly symmetric complex gaussian with E|z|^2 = 1.
    std::complex<double> next_cn() {
        const double a = next();
        const double b = next();
        return {a * 0.70710678118654752440, b * 0.70710678118654752440};
    }

  private:
    CounterRng rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mbm
