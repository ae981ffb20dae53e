#include "lem/traversal.hpp"

#include <string>

#include "lem/error.hpp"

namespace lem {

namespace {

[[noreturn]] void throw_cycle(std::size_t placed, std::size_t total) {
  throw StructureError("receiver graph has a cycle: only " +
                       std::to_string(placed) + " of " +
                       std::to_string(total) + " cells reachable from sources");
}

}  // namespace

TraversalPlan generate_queue(std::span<const CellIndex> rec,
                             std::span<const CellIndex> donor,
                             std::span<const std::uint8_t> dnum, int dmax) {
  const std::size_t n = rec.size();
  TraversalPlan plan;
  plan.order.reserve(n);
  plan.levels.push_back(0);

  // Level 0: every cell without a receiver, in array order.
  for (std::size_t c = 0; c < n; ++c)
    if (rec[c] == kNoFlow) plan.order.push_back(static_cast<CellIndex>(c));
  plan.levels.push_back(static_cast<std::uint32_t>(plan.order.size()));

  // Expand wave by wave: the next level is the donors of the current one.
  std::size_t lo = 0;
  std::size_t hi = plan.order.size();
  while (lo < hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const CellIndex c = plan.order[i];
      const std::size_t base = static_cast<std::size_t>(dmax) * c;
      for (int k = 0; k < dnum[c]; ++k) plan.order.push_back(donor[base + k]);
    }
    lo = hi;
    hi = plan.order.size();
    if (hi > lo) plan.levels.push_back(static_cast<std::uint32_t>(hi));
  }

  if (plan.order.size() != n) throw_cycle(plan.order.size(), n);
  return plan;
}

TraversalPlan generate_stack(std::span<const CellIndex> rec,
                             std::span<const CellIndex> donor,
                             std::span<const std::uint8_t> dnum, int dmax) {
  const std::size_t n = rec.size();
  TraversalPlan plan;
  plan.order.reserve(n);
  plan.levels.push_back(0);

  std::vector<CellIndex> stack;
  for (std::size_t src = 0; src < n; ++src) {
    if (rec[src] != kNoFlow) continue;
    // Pre-order walk of this source's donor tree. Donors are pushed in
    // reverse slot order so they pop in slot order.
    stack.push_back(static_cast<CellIndex>(src));
    while (!stack.empty()) {
      const CellIndex c = stack.back();
      stack.pop_back();
      plan.order.push_back(c);
      const std::size_t base = static_cast<std::size_t>(dmax) * c;
      for (int k = dnum[c] - 1; k >= 0; --k) stack.push_back(donor[base + k]);
    }
    plan.levels.push_back(static_cast<std::uint32_t>(plan.order.size()));
  }

  if (plan.order.size() != n) throw_cycle(plan.order.size(), n);
  return plan;
}

}  // namespace lem
