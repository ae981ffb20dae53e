#pragma once

#include <span>

#include "lem/flow_graph.hpp"
#include "lem/raster.hpp"
#include "lem/traversal.hpp"

namespace lem {

/// Flow accumulation: for each cell, the total source amount draining
/// through it, in cell-area units when weights are uniform.
struct AccumField {
  Raster<double> values;
  double cell_area = 1.0;
};

/// Per-cell accumulation kernel: adds the already-final values of c's donors
/// to A[c], in donor-slot order. The fixed summation order is what makes the
/// result independent of how many workers process a level.
inline void add_donor_flow(std::span<double> A, std::span<const CellIndex> donor,
                           std::span<const std::uint8_t> dnum, int dmax,
                           CellIndex c) {
  const std::size_t base = static_cast<std::size_t>(dmax) * c;
  double a = A[c];
  for (int k = 0; k < dnum[c]; ++k) a += A[donor[base + k]];
  A[c] = a;
}

/// Core sweep over pre-initialized values: on entry A[c] must hold w(c); on
/// exit A[c] = w(c) + sum of A over c's donors, evaluated over the plan's
/// order back to front so donor values are final when read (valid for both
/// queue and stack plans).
void accumulate_into(const TraversalPlan& plan, std::span<const CellIndex> donor,
                     std::span<const std::uint8_t> dnum, int dmax,
                     std::span<double> A);

/// A[c] = uniform_weight + donor inflow, typically cell area dx*dy.
AccumField accumulate(const TraversalPlan& plan, const FlowGraph& fg,
                      double uniform_weight);

/// Same, with a per-cell source amount (spatially varying rainfall etc.).
AccumField accumulate(const TraversalPlan& plan, const FlowGraph& fg,
                      std::span<const double> weights, double cell_area);

}  // namespace lem
