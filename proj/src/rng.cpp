#include "mrw/rng.hpp"

#include <cmath>
#include <numbers>

namespace mrw {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : base_(mix64(seed ^ mix64(stream + golden))), state_(base_) {}

double CounterRng::normal() noexcept {
    const double u1 = uniform_open_left();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
    return mix64(seed + mix64(salt ^ 0xD1B54A32D192ED03ULL));
}

}  // namespace mrw
