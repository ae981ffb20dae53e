#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lem/flow_graph.hpp"
#include "lem/raster.hpp"

namespace lem {

/// A processing order over all cells plus the boundaries that partition it.
///
/// For the breadth-first (queue) order, order[levels[l] .. levels[l+1]) is
/// level l: all cells whose receiver chain to a source has length l. Cells
/// within one level are mutually independent and may run concurrently.
///
/// For the depth-first (stack) order, the boundaries delimit one segment per
/// source cell; each segment is a pre-order walk of that source's donor tree.
struct TraversalPlan {
  std::vector<CellIndex> order;
  std::vector<std::uint32_t> levels;  // levels.front()==0, levels.back()==N

  std::size_t nlevels() const { return levels.empty() ? 0 : levels.size() - 1; }
  std::uint32_t level_begin(std::size_t l) const { return levels[l]; }
  std::uint32_t level_end(std::size_t l) const { return levels[l + 1]; }
};

/// Breadth-first order: level 0 holds every cell without a receiver
/// (perimeter and interior pits) in ascending index order; each later level
/// holds, for each cell of the previous level in order, that cell's donors
/// in slot order. Only non-empty levels are recorded.
///
/// Throws StructureError if the receiver graph contains a cycle (some cells
/// would never be reached).
TraversalPlan generate_queue(std::span<const CellIndex> rec,
                             std::span<const CellIndex> donor,
                             std::span<const std::uint8_t> dnum, int dmax);

/// Depth-first order: for each source cell in ascending index order, emits
/// the cell followed by each donor subtree in slot order. One segment per
/// source tree.
TraversalPlan generate_stack(std::span<const CellIndex> rec,
                             std::span<const CellIndex> donor,
                             std::span<const std::uint8_t> dnum, int dmax);

inline TraversalPlan generate_queue(const FlowGraph& fg) {
  return generate_queue(fg.rec, fg.donor, fg.dnum, fg.dmax);
}
inline TraversalPlan generate_stack(const FlowGraph& fg) {
  return generate_stack(fg.rec, fg.donor, fg.dnum, fg.dmax);
}

}  // namespace lem
