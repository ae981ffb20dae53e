#include <lem/depressions.hpp>

#include <queue>
#include <utility>
#include <vector>

#include <lem/neighborhood.hpp>

namespace lem {
namespace {

// Min-heap entry: (spill elevation, cell). Lower elevation first; equal
// elevations break ties by lower cell index so the flood order, and with it
// the epsilon-filled surface, is deterministic.
using HeapEntry = std::pair<double, CellIndex>;

struct HeapGreater {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  }
};

}  // namespace

Raster<double> priority_flood_fill(const Raster<double>& elev, const FillOptions& opts) {
  Raster<double> filled = elev;
  if (opts.mode == FillMode::kOff) return filled;

  const std::uint32_t w = filled.width();
  const std::uint32_t h = filled.height();
  const std::size_t n = filled.size();
  const Neighborhood nbh = Neighborhood::d8(1.0, 1.0);

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapGreater> open;
  std::vector<char> visited(n, 0);

  // The perimeter drains off-grid by definition, so it seeds the flood at
  // its own elevation.
  for (CellIndex c = 0; c < n; ++c) {
    if (!filled.is_perimeter(c)) continue;
    open.emplace(filled[c], c);
    visited[c] = 1;
  }

  const double eps = opts.epsilon_increment;
  while (!open.empty()) {
    const auto [spill, c] = open.top();
    open.pop();
    const std::int64_t cx = static_cast<std::int64_t>(c % w);
    const std::int64_t cy = static_cast<std::int64_t>(c / w);
    for (int k = 0; k < 8; ++k) {
      const std::int64_t nx = cx + nbh.offsets[k].dx;
      const std::int64_t ny = cy + nbh.offsets[k].dy;
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const CellIndex nc = static_cast<CellIndex>(ny * w + nx);
      if (visited[nc]) continue;
      visited[nc] = 1;
      if (opts.mode == FillMode::kExact) {
        if (filled[nc] < spill) filled[nc] = spill;
      } else {  // kEpsilonAscending
        if (filled[nc] <= spill) filled[nc] = spill + eps;
      }
      open.emplace(filled[nc], nc);
    }
  }
  return filled;
}

}  // namespace lem
