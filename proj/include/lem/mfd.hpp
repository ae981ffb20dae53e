#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lem/accumulation.hpp"
#include "lem/neighborhood.hpp"
#include "lem/raster.hpp"
#include "lem/traversal.hpp"

namespace lem {

/// Multiple-flow-direction graph: each cell apportions flow among all of its
/// strictly-downslope neighbours with weights alpha that sum to at most 1.
///
/// Receivers are stored as dmax slots per cell (recs/alpha, count rnum).
/// The inverse relation is kept alongside: donors/donor_alpha list, for each
/// cell c, the upstream cells n routing into c together with alpha(n,c), in
/// ascending n order. Accumulation pulls through this table so each cell
/// writes only its own value.
struct MfdFlowGraph {
  int width = 0;
  int height = 0;
  int dmax = 0;
  std::vector<CellIndex> recs;
  std::vector<double> alpha;
  std::vector<std::uint8_t> rnum;
  std::vector<CellIndex> donors;
  std::vector<double> donor_alpha;
  std::vector<std::uint8_t> dnum;  // donor-edge indegree of each cell

  std::size_t size() const { return rnum.size(); }

  void resize(std::size_t n, int dmax_) {
    dmax = dmax_;
    recs.assign(n * dmax_, kNoFlow);
    alpha.assign(n * dmax_, 0.0);
    rnum.assign(n, 0);
    donors.assign(n * dmax_, kNoFlow);
    donor_alpha.assign(n * dmax_, 0.0);
    dnum.assign(n, 0);
  }
};

/// Rebuilds donors/donor_alpha/dnum from recs/alpha/rnum. Iterates cells in
/// ascending order, so each cell's donor slots end up sorted by donor index.
void build_mfd_donor_table(MfdFlowGraph& mfd);

/// Slope-proportional MFD routing: every strictly-downslope neighbour of an
/// interior cell becomes a receiver with weight slope^exponent, normalized
/// to sum to 1. Cells with no downslope neighbour, and all perimeter cells,
/// get no receivers.
MfdFlowGraph compute_mfd(const Raster<double>& elev, const Neighborhood& nbh,
                         double exponent = 1.0);

/// Dependency-counting level order: level 0 holds cells with no receivers;
/// a cell is placed one level above its deepest receiver. Within a level,
/// ascending cell index. Throws StructureError on a cycle.
TraversalPlan generate_mfd_order(const MfdFlowGraph& mfd);

/// Per-cell MFD accumulation kernel (the MFD counterpart of
/// add_donor_flow): pulls alpha-weighted donor values in slot order. Shared
/// by the serial sweep and the per-level parallel sweep so both run the
/// same arithmetic.
inline void add_mfd_donor_flow(std::span<double> A, const MfdFlowGraph& mfd,
                               CellIndex c) {
  const std::size_t base = static_cast<std::size_t>(mfd.dmax) * c;
  double a = A[c];
  for (int k = 0; k < mfd.dnum[c]; ++k)
    a += mfd.donor_alpha[base + k] * A[mfd.donors[base + k]];
  A[c] = a;
}

/// A[c] = w(c) + sum over donors n of alpha(n,c)*A[n]; sweeps plan levels
/// from the last (leaf) level down so donor values are final when pulled.
void accumulate_mfd_into(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                         std::span<double> A);

AccumField accumulate_mfd(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                          double uniform_weight);
AccumField accumulate_mfd(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                          std::span<const double> weights, double cell_area);

}  // namespace lem
