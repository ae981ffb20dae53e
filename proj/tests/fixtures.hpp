#pragma once

// Shared test fixtures. The centerpiece is a 10-node explicit graph with a
// hand-computed receiver/donor/queue/accumulation solution, exercised through
// the same templated kernels as the raster pipeline.

#include <cstdint>
#include <utility>
#include <vector>

#include <lem/flow_graph.hpp>
#include <lem/mfd.hpp>
#include <lem/raster.hpp>
#include <lem/terrain.hpp>
#include <lem/traversal.hpp>

namespace fixtures {

// Irregular node set with an explicit adjacency list; satisfies the same
// shape as GridGraph (size / max_degree / is_boundary / for_each_neighbor)
// so the flow-graph kernels run on it unchanged.
struct ExplicitGraph {
  std::vector<std::vector<std::pair<lem::CellIndex, double>>> adj;
  std::vector<bool> boundary;
  int dmax = 0;

  std::size_t size() const { return adj.size(); }
  int max_degree() const { return dmax; }
  bool is_boundary(lem::CellIndex c) const { return boundary[c]; }

  template <typename F>
  void for_each_neighbor(lem::CellIndex c, F&& f) const {
    for (const auto& [n, dist] : adj[c]) f(n, dist);
  }

  double distance_between(lem::CellIndex a, lem::CellIndex b) const {
    for (const auto& [n, dist] : adj[a])
      if (n == b) return dist;
    return 0.0;
  }
};

// The 10-node worked example (nodes 0..9). Elevations and the expected
// receiver/donor/queue/accumulation arrays below were derived by hand from
// the adjacency; the unit tests and the first acceptance check replay them.
//
// Distances are 1 except d(0,3)=d(2,3)=2, d(7,8)=3, d(8,9)=2, chosen so that
// every steepest receiver is unique except the two genuine ties (node 2 and
// node 6), which resolve by first-in-order.
inline ExplicitGraph ten_node_graph() {
  ExplicitGraph g;
  g.adj = {
      {{1, 1}, {2, 1}, {3, 2}},                          // 0
      {{0, 1}, {2, 1}, {4, 1}, {5, 1}},                  // 1
      {{0, 1}, {1, 1}, {3, 2}, {5, 1}, {6, 1}},          // 2
      {{0, 2}, {2, 2}, {6, 1}, {8, 1}},                  // 3
      {{1, 1}, {5, 1}, {7, 1}},                          // 4
      {{1, 1}, {2, 1}, {4, 1}, {6, 1}, {7, 1}},          // 5
      {{2, 1}, {3, 1}, {5, 1}, {7, 1}, {8, 1}},          // 6
      {{4, 1}, {5, 1}, {6, 1}, {8, 3}, {9, 1}},          // 7
      {{3, 1}, {6, 1}, {7, 3}, {9, 2}},                  // 8
      {{7, 1}, {8, 2}},                                  // 9
  };
  g.boundary.assign(10, false);  // node 4 is a natural pit (global minimum)
  g.dmax = 5;
  return g;
}

inline std::vector<double> ten_node_elevations() {
  return {3, 2, 3, 4, 1, 2, 3, 2, 4, 3};
}

// Expected solution, all 0-based.
inline const std::vector<lem::CellIndex> kTenNodeRec = {
    1, 4, 1, 6, lem::kNoFlow, 4, 5, 4, 6, 7};
inline const std::vector<std::uint8_t> kTenNodeDnum = {0, 2, 0, 0, 3,
                                                       1, 2, 1, 0, 0};
inline const std::vector<lem::CellIndex> kTenNodeQueue = {4, 1, 5, 7, 0,
                                                          2, 6, 9, 3, 8};
inline const std::vector<std::uint32_t> kTenNodeLevels = {0, 1, 4, 8, 10};
inline const std::vector<lem::CellIndex> kTenNodeStack = {4, 1, 0, 2, 5,
                                                          6, 3, 8, 7, 9};
inline const std::vector<double> kTenNodeAccum = {1, 3, 1, 1, 10,
                                                  4, 3, 2, 1, 1};

// Receiver/donor computation over an explicit graph, through the same
// template kernels the raster pipeline uses.
struct ExplicitFlow {
  std::vector<lem::CellIndex> rec;
  std::vector<lem::CellIndex> donor;
  std::vector<std::uint8_t> dnum;
  int dmax = 0;
};

inline ExplicitFlow solve_flow(const ExplicitGraph& g,
                               const std::vector<double>& elev) {
  ExplicitFlow f;
  f.dmax = g.max_degree();
  f.rec.assign(g.size(), lem::kNoFlow);
  f.donor.assign(g.size() * f.dmax, lem::kNoFlow);
  f.dnum.assign(g.size(), 0);
  lem::compute_receivers(g, elev, f.rec);
  lem::compute_donors(g, f.rec, f.donor, f.dnum);
  return f;
}

// MFD variant of the ten-node example: the same receiver edges plus the two
// extra downslope edges 2->5 and 6->7, weights split equally where a cell
// has two receivers. Terminal cell 4 keeps no receivers.
inline lem::MfdFlowGraph ten_node_mfd() {
  lem::MfdFlowGraph mfd;
  mfd.resize(10, 5);
  auto set = [&](lem::CellIndex c,
                 std::vector<std::pair<lem::CellIndex, double>> recs) {
    std::size_t base = static_cast<std::size_t>(mfd.dmax) * c;
    mfd.rnum[c] = static_cast<std::uint8_t>(recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) {
      mfd.recs[base + k] = recs[k].first;
      mfd.alpha[base + k] = recs[k].second;
    }
  };
  set(0, {{1, 1.0}});
  set(1, {{4, 1.0}});
  set(2, {{1, 0.5}, {5, 0.5}});
  set(3, {{6, 1.0}});
  set(5, {{4, 1.0}});
  set(6, {{5, 0.5}, {7, 0.5}});
  set(7, {{4, 1.0}});
  set(8, {{6, 1.0}});
  set(9, {{7, 1.0}});
  lem::build_mfd_donor_table(mfd);
  return mfd;
}

// Expected equal-split MFD accumulation with unit weights (hand-computed).
inline const std::vector<double> kTenNodeMfdAccum = {1, 2.5, 1,   1, 10,
                                                     3, 3,   3.5, 1, 1};

// elev(x,y) = x + y: every interior cell drains diagonally toward (0,0).
inline lem::Raster<double> ramp_raster(int w, int h) {
  lem::Raster<double> r(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) r.at(x, y) = x + y;
  return r;
}

inline lem::Raster<double> random_raster(int w, int h, std::uint64_t seed) {
  return lem::generate_terrain(static_cast<std::uint32_t>(w),
                               static_cast<std::uint32_t>(h), seed);
}

}  // namespace fixtures
