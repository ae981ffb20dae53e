#pragma once

#include <optional>
#include <string>

#include <lem/raster.hpp>

namespace lem {

/// LEM1 raster file: one textual header line `LEM1 <width> <height>` followed
/// by width*height row-major IEEE-754 doubles, 64-bit little-endian. The
/// payload is written byte-for-byte, so round trips preserve every bit
/// (including NaNs and infinities, which the simulation itself rejects).
void write_raster(const Raster<double>& r, const std::string& path);
Raster<double> read_raster(const std::string& path);

/// Plain-text export for external plotting: one space-separated row per line,
/// max_digits10 precision. Not meant to round-trip; use LEM1 for that.
void write_raster_text(const Raster<double>& r, const std::string& path);

/// Index of the first cell (row-major) whose bit pattern differs, or nullopt
/// if the rasters are byte-identical. Mismatched dimensions return cell 0.
std::optional<CellIndex> first_difference(const Raster<double>& a, const Raster<double>& b);

}  // namespace lem
