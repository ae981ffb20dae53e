#include <lem/terrain.hpp>

namespace lem {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
}

// One step of splitmix64 (Steele, Lea & Flood 2014) from state x: advance by
// the golden gamma, then the standard 2-round mix. The constants are part of
// the reproducibility contract; do not change them.
std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Raster<double> generate_terrain(std::uint32_t width, std::uint32_t height, std::uint64_t seed) {
  Raster<double> r(width, height);
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    // splitmix64(seed + i*gamma) is output i of the splitmix64 stream seeded
    // with `seed` -- a pure function of (seed, i), so any evaluation order
    // (or thread count) yields the same raster.
    const std::uint64_t z = splitmix64(seed + static_cast<std::uint64_t>(i) * kGamma);
    // Top 53 bits -> double in [0,1).
    r[static_cast<CellIndex>(i)] = static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  return r;
}

}  // namespace lem
