#include "saddle/noise.hpp"

#include <cmath>
#include <numbers>

namespace saddle {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

double standard_normal(std::uint64_t seed, std::uint32_t axis, std::uint64_t step) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64((std::uint64_t{axis} << 56) ^ step));
  const std::uint64_t a = splitmix64(key);
  const std::uint64_t b = splitmix64(key ^ 0x6A09E667F3BCC909ULL);
  constexpr double inv53 = 1.0 / 9007199254740992.0;
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * inv53; // (0, 1]
  const double u2 = static_cast<double>(b >> 11) * inv53;         // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace saddle
