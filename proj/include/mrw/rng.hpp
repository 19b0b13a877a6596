#pragma once

#include <cstdint>

namespace mrw {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Counter-based generator. Output number k of stream s is a pure function of
// (seed, s, k): draw k returns mix64(base(seed, s) + (k + 1) * golden). Path p
// of a Monte Carlo experiment uses stream p, so results do not depend on how
// paths are distributed over workers.
class CounterRng {
public:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next() noexcept {
        state_ += golden;
        return mix64(state_);
    }

    // Uniform on [0, 1) with 53 bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_left() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal variate (Box-Muller, one output per pair of uniforms).
    double normal() noexcept;

    // Draws taken so far; golden is odd, so multiply by its inverse mod 2^64.
    std::uint64_t counter() const noexcept { return (state_ - base_) * golden_inverse(); }

    using result_type = std::uint64_t;
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next(); }

private:
    static constexpr std::uint64_t golden_inverse() noexcept {
        std::uint64_t x = golden;  // Newton iteration, each step doubles the correct bits
        for (int k = 0; k < 5; ++k) x *= 2 - golden * x;
        return x;
    }
    std::uint64_t base_;
    std::uint64_t state_;
};

// Derives an independent sub-seed, e.g. for the per-state runs of a
// pi-weighted average.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

}  // namespace mrw
