#pragma once

#include <lem/raster.hpp>

namespace lem {

enum class FillMode {
  kOff,               // leave depressions alone (interior pits become lakes)
  kExact,             // raise to the spill elevation, leaves flats
  kEpsilonAscending,  // raise slightly above the spill path, drainable flats
};

struct FillOptions {
  FillMode mode = FillMode::kOff;
  // Relative to the unit-range terrains this engine generates: large enough
  // that adding it to elevations O(1) always changes the value (ulp(1.0)
  // ~ 2e-16), small enough not to distort relief over many filled steps.
  double epsilon_increment = 1e-8;
};

/// Priority-Flood depression filling. Floods inward from the perimeter,
/// always expanding the lowest frontier cell first (ties by cell index), so
/// every cell is visited through its lowest possible spill path. kExact
/// raises depression cells to their outlet elevation; kEpsilonAscending adds
/// epsilon_increment per step away from the outlet so the filled surface
/// still drains. kOff returns the input unchanged.
Raster<double> priority_flood_fill(const Raster<double>& elev, const FillOptions& opts);

}  // namespace lem
