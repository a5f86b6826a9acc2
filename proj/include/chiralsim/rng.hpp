#pragma once

// Counter-based SplitMix64 streams.
//
// Stream-splitting rule: the draw for atom index i in disorder sample s under
// seed S is
//     key_s = splitmix64(S ^ splitmix64(s + 1))
//     u     = splitmix64(key_s + (i + 1) * 0x9E3779B97F4A7C15)
// so every (sample, atom) value is fixed independently of evaluation order.

#include <cstdint>

namespace chiralsim::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t sample_index) {
    return splitmix64(seed ^ splitmix64(sample_index + 1));
}

constexpr std::uint64_t draw(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t atom_index) {
    return splitmix64(stream_key(seed, sample_index) + (atom_index + 1) * 0x9E3779B97F4A7C15ull);
}

/// Uniform value in the open interval (0, 1) from the top 53 bits.
constexpr double to_open_unit(std::uint64_t u) {
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

/// R in (-0.5, 0.5) for one atom of one disorder sample.
constexpr double centered_uniform(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t atom_index) {
    return to_open_unit(draw(seed, sample_index, atom_index)) - 0.5;
}

} // namespace chiralsim::rng
