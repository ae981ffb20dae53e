#include "lem/flow_graph.hpp"

namespace lem {

std::vector<std::pair<CellIndex, double>> neighbors(CellIndex c, int width,
                                                    int height,
                                                    const Neighborhood& nbh) {
  std::vector<std::pair<CellIndex, double>> out;
  out.reserve(nbh.connectivity);
  GridGraph g(width, height, nbh);
  g.for_each_neighbor(c, [&](CellIndex n, double d) { out.emplace_back(n, d); });
  return out;
}

FlowGraph compute_receivers(const Raster<double>& elev,
                            const Neighborhood& nbh) {
  FlowGraph fg;
  fg.resize(elev.width(), elev.height(), nbh.connectivity);
  GridGraph g(elev.width(), elev.height(), nbh);
  compute_receivers(g, elev.values(), std::span<CellIndex>(fg.rec));
  return fg;
}

void compute_donors(FlowGraph& fg, const Neighborhood& nbh) {
  GridGraph g(fg.width, fg.height, nbh);
  compute_donors(g, std::span<const CellIndex>(fg.rec),
                 std::span<CellIndex>(fg.donor),
                 std::span<std::uint8_t>(fg.dnum));
}

}  // namespace lem
