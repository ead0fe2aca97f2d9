#include "chase_escape/random.hpp"

#include <cmath>
#include <stdexcept>

namespace chase {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ splitmix64(a + 0x632be59bd9b4e019ULL));
  s = splitmix64(s ^ splitmix64(b + 0x8cb92ba72f3d8dd7ULL));
  return s;
}

double exponential(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-uniform01(rng)) / rate;
}

}  // namespace chase
