#include "lem/accumulation.hpp"

#include <cassert>

namespace lem {

void accumulate_into(const TraversalPlan& plan, std::span<const CellIndex> donor,
                     std::span<const std::uint8_t> dnum, int dmax,
                     std::span<double> A) {
  // Walking the whole order backwards finalizes donors before their
  // receiver under both plan shapes: reversed queue levels keep leaf levels
  // first, and a reversed pre-order stack segment is exactly children
  // before parent. Cells within one queue level are independent, so this is
  // bit-identical to a per-level sweep.
  for (std::size_t i = plan.order.size(); i-- > 0;)
    add_donor_flow(A, donor, dnum, dmax, plan.order[i]);
}

AccumField accumulate(const TraversalPlan& plan, const FlowGraph& fg,
                      double uniform_weight) {
  AccumField out;
  out.cell_area = uniform_weight;
  out.values = Raster<double>(fg.width, fg.height, uniform_weight);
  accumulate_into(plan, fg.donor, fg.dnum, fg.dmax, out.values.values());
  return out;
}

AccumField accumulate(const TraversalPlan& plan, const FlowGraph& fg,
                      std::span<const double> weights, double cell_area) {
  assert(weights.size() == fg.size());
  AccumField out;
  out.cell_area = cell_area;
  out.values = Raster<double>(
      fg.width, fg.height, std::vector<double>(weights.begin(), weights.end()));
  accumulate_into(plan, fg.donor, fg.dnum, fg.dmax, out.values.values());
  return out;
}

}  // namespace lem
