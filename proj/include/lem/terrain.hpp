#pragma once

#include <cstdint>

#include <lem/raster.hpp>

namespace lem {

/// One splitmix64 output for counter value x. Public mostly for tests.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform random terrain on [0,1), i.i.d. per cell.
///
/// Cell i draws from splitmix64 at counter seed + i*golden-gamma (output i of
/// the stream seeded with `seed`), i.e. a pure function of (seed, i). That
/// keeps generation platform-stable (no std::mt19937 distribution
/// differences), order-independent, and safe to parallelize per cell.
Raster<double> generate_terrain(std::uint32_t width, std::uint32_t height, std::uint64_t seed);

}  // namespace lem
