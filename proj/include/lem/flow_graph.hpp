#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lem/grid_graph.hpp"
#include "lem/neighborhood.hpp"
#include "lem/raster.hpp"

namespace lem {

/// Single-receiver (D8) flow graph over a raster.
///
/// rec[c]  - the steepest-descent neighbour of c, or kNoFlow.
/// donor   - flat table of dmax slots per cell; slots [dmax*c, dmax*c+dnum[c])
///           hold the cells that drain into c, in stencil order.
/// dnum[c] - number of filled donor slots of c.
struct FlowGraph {
  int width = 0;
  int height = 0;
  int dmax = 0;
  std::vector<CellIndex> rec;
  std::vector<CellIndex> donor;
  std::vector<std::uint8_t> dnum;

  std::size_t size() const { return rec.size(); }

  void resize(int w, int h, int dmax_) {
    width = w;
    height = h;
    dmax = dmax_;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    rec.assign(n, kNoFlow);
    donor.assign(n * dmax_, kNoFlow);
    dnum.assign(n, 0);
  }
};

/// Per-cell receiver kernel: the neighbour with the greatest positive
/// downhill slope, ties broken by keeping the first neighbour encountered
/// (strict > comparison). Boundary cells never transfer flow. Returns
/// kNoFlow when no neighbour is strictly lower per unit distance.
template <typename Graph>
CellIndex steepest_receiver(const Graph& g, std::span<const double> elev,
                            CellIndex c) {
  if (g.is_boundary(c)) return kNoFlow;
  double s_max = 0.0;
  CellIndex n_max = kNoFlow;
  const double ec = elev[c];
  g.for_each_neighbor(c, [&](CellIndex n, double dist) {
    const double s = (ec - elev[n]) / dist;
    if (s > s_max) {
      s_max = s;
      n_max = n;
    }
  });
  return n_max;
}

/// Per-cell donor kernel: scans c's own neighbours for cells that drain into
/// c (pull-based, so each cell writes only its own slots and the loop over
/// cells is race-free). Writes into slots[0..dmax) and returns the count.
template <typename Graph>
std::uint8_t donors_of(const Graph& g, std::span<const CellIndex> rec,
                       CellIndex c, CellIndex* slots) {
  std::uint8_t k = 0;
  g.for_each_neighbor(c, [&](CellIndex n, double) {
    if (rec[n] == c) slots[k++] = n;
  });
  return k;
}

template <typename Graph>
void compute_receivers(const Graph& g, std::span<const double> elev,
                       std::span<CellIndex> rec) {
  const std::size_t n = g.size();
  for (std::size_t c = 0; c < n; ++c)
    rec[c] = steepest_receiver(g, elev, static_cast<CellIndex>(c));
}

template <typename Graph>
void compute_donors(const Graph& g, std::span<const CellIndex> rec,
                    std::span<CellIndex> donor, std::span<std::uint8_t> dnum) {
  const std::size_t n = g.size();
  const int dmax = g.max_degree();
  for (std::size_t c = 0; c < n; ++c)
    dnum[c] = donors_of(g, rec, static_cast<CellIndex>(c),
                        donor.data() + dmax * c);
}

/// Convenience wrappers for raster inputs.
FlowGraph compute_receivers(const Raster<double>& elev,
                            const Neighborhood& nbh);
void compute_donors(FlowGraph& fg, const Neighborhood& nbh);

}  // namespace lem
