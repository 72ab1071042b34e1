// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace relaysim {

namespace detail {

/// splitmix64 finalizer; decorrelates nearby seed values.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic substream of a master seed. Distinct stream indices give
/// statistically independent sequences; the same (master_seed, stream_index)
/// pair reproduces the same sequence on every run and worker layout.
///
/// Gaussian variates are produced by Box-Muller on top of the engine's raw
/// 64-bit output, so sequences do not depend on the standard library's
/// distribution implementations.
class RandomStream {
  public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : engine_(detail::mix64(detail::mix64(master_seed) ^ detail::mix64(~stream_index))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal N(0, 1).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Circularly symmetric complex Gaussian CN(0, 1): real and imaginary
    /// parts each N(0, 1/2).
    std::complex<double> complex_gaussian() {
        const double g0 = gaussian();
        const double g1 = gaussian();
        return {g0 * std::numbers::sqrt2 / 2.0, g1 * std::numbers::sqrt2 / 2.0};
    }

    /// Exponential with unit mean, the squared magnitude of a CN(0, 1) draw.
    double exponential() { return -std::log1p(-uniform()); }

    /// One uniformly random bit, buffered from 64-bit engine output.
    int bit() {
        if (bits_left_ == 0) {
            bit_buffer_ = next_u64();
            bits_left_ = 64;
        }
        const int b = static_cast<int>(bit_buffer_ & 1u);
        bit_buffer_ >>= 1;
        --bits_left_;
        return b;
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling keeps the draw exactly uniform.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

}  // namespace relaysim
