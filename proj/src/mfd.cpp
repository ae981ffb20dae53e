#include "lem/mfd.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "lem/error.hpp"
#include "lem/grid_graph.hpp"

namespace lem {

void build_mfd_donor_table(MfdFlowGraph& mfd) {
  const std::size_t n = mfd.size();
  std::fill(mfd.dnum.begin(), mfd.dnum.end(), std::uint8_t{0});
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t base = static_cast<std::size_t>(mfd.dmax) * c;
    for (int k = 0; k < mfd.rnum[c]; ++k) {
      const CellIndex r = mfd.recs[base + k];
      if (mfd.dnum[r] >= mfd.dmax)
        throw StructureError("MFD donor slots full at cell " + std::to_string(r) +
                             ": dmax " + std::to_string(mfd.dmax) +
                             " is smaller than its donor count");
      const std::size_t slot =
          static_cast<std::size_t>(mfd.dmax) * r + mfd.dnum[r];
      mfd.donors[slot] = static_cast<CellIndex>(c);
      mfd.donor_alpha[slot] = mfd.alpha[base + k];
      ++mfd.dnum[r];
    }
  }
}

MfdFlowGraph compute_mfd(const Raster<double>& elev, const Neighborhood& nbh,
                         double exponent) {
  MfdFlowGraph mfd;
  mfd.width = elev.width();
  mfd.height = elev.height();
  mfd.resize(elev.size(), nbh.connectivity);

  const GridGraph g(elev.width(), elev.height(), nbh);
  const auto e = elev.values();
  for (std::size_t ci = 0; ci < mfd.size(); ++ci) {
    const CellIndex c = static_cast<CellIndex>(ci);
    if (g.is_boundary(c)) continue;
    const std::size_t base = static_cast<std::size_t>(mfd.dmax) * ci;

    double wsum = 0.0;
    std::uint8_t k = 0;
    g.for_each_neighbor(c, [&](CellIndex nb, double dist) {
      if (e[nb] >= e[c]) return;  // receivers must be strictly lower
      const double slope = (e[c] - e[nb]) / dist;
      const double w = std::pow(slope, exponent);
      mfd.recs[base + k] = nb;
      mfd.alpha[base + k] = w;
      wsum += w;
      ++k;
    });
    mfd.rnum[ci] = k;
    for (int i = 0; i < k; ++i) mfd.alpha[base + i] /= wsum;
  }

  build_mfd_donor_table(mfd);
  return mfd;
}

TraversalPlan generate_mfd_order(const MfdFlowGraph& mfd) {
  const std::size_t n = mfd.size();
  TraversalPlan plan;
  plan.order.reserve(n);
  plan.levels.push_back(0);

  // remaining[c] counts c's receivers not yet placed; a cell joins the wave
  // after its last receiver is placed, i.e. one level above its deepest one.
  std::vector<std::uint8_t> remaining(mfd.rnum.begin(), mfd.rnum.end());
  for (std::size_t c = 0; c < n; ++c)
    if (remaining[c] == 0) plan.order.push_back(static_cast<CellIndex>(c));
  plan.levels.push_back(static_cast<std::uint32_t>(plan.order.size()));

  std::size_t lo = 0;
  std::size_t hi = plan.order.size();
  std::vector<CellIndex> next;
  while (lo < hi) {
    next.clear();
    for (std::size_t i = lo; i < hi; ++i) {
      const CellIndex c = plan.order[i];
      const std::size_t base = static_cast<std::size_t>(mfd.dmax) * c;
      for (int k = 0; k < mfd.dnum[c]; ++k) {
        const CellIndex d = mfd.donors[base + k];
        if (--remaining[d] == 0) next.push_back(d);
      }
    }
    std::sort(next.begin(), next.end());
    plan.order.insert(plan.order.end(), next.begin(), next.end());
    lo = hi;
    hi = plan.order.size();
    if (hi > lo) plan.levels.push_back(static_cast<std::uint32_t>(hi));
  }

  if (plan.order.size() != n)
    throw StructureError("MFD graph has a cycle: only " +
                         std::to_string(plan.order.size()) + " of " +
                         std::to_string(n) + " cells orderable");
  return plan;
}

void accumulate_mfd_into(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                         std::span<double> A) {
  for (std::size_t l = plan.nlevels(); l-- > 0;) {
    for (std::uint32_t i = plan.level_begin(l); i < plan.level_end(l); ++i)
      add_mfd_donor_flow(A, mfd, plan.order[i]);
  }
}

AccumField accumulate_mfd(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                          double uniform_weight) {
  AccumField out;
  out.cell_area = uniform_weight;
  out.values = Raster<double>(mfd.width, mfd.height, uniform_weight);
  accumulate_mfd_into(plan, mfd, out.values.values());
  return out;
}

AccumField accumulate_mfd(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                          std::span<const double> weights, double cell_area) {
  assert(weights.size() == mfd.size());
  AccumField out;
  out.cell_area = cell_area;
  out.values = Raster<double>(
      mfd.width, mfd.height, std::vector<double>(weights.begin(), weights.end()));
  accumulate_mfd_into(plan, mfd, out.values.values());
  return out;
}

}  // namespace lem
