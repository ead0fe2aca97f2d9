#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace chase {

using Rng = std::mt19937_64;

// Recorded in manifests so outputs can be compared across versions.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64 seeded by splitmix64(master, a, b)";

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based split: the stream for (master, a, b) does not depend on how
// many other streams were drawn before it.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

inline Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return Rng(derive_seed(master, a, b));
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exponential with the given positive rate, by inversion.
double exponential(Rng& rng, double rate);

}  // namespace chase
