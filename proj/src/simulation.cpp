#include <lem/simulation.hpp>

#include <chrono>

namespace lem {

double PhaseTimings::total() const {
  double t = 0.0;
  for (double s : seconds) t += s;
  return t;
}

PhaseTimings& PhaseTimings::operator+=(const PhaseTimings& o) {
  for (int i = 0; i < kNumPhases; ++i) seconds[i] += o.seconds[i];
  return *this;
}

namespace {

using Clock = std::chrono::steady_clock;

double lap(Clock::time_point& t0) {
  const auto t1 = Clock::now();
  const double s = std::chrono::duration<double>(t1 - t0).count();
  t0 = t1;
  return s;
}

}  // namespace

StepDiagnostics simulate_front(Raster<double>& elev, const GridGraph& grid,
                               const SimParams& params, const StepSetup& setup,
                               SimWorkspace& ws) {
  StepDiagnostics d;
  const std::size_t n = grid.size();
  ws.fg.resize(grid.width(), grid.height(), grid.max_degree());

  auto t0 = Clock::now();
  compute_receivers(grid, elev.values(), ws.fg.rec);
  d.timings[Phase::kReceivers] = lap(t0);

  for (std::size_t c = 0; c < n; ++c)
    if (ws.fg.rec[c] == kNoFlow && !grid.is_boundary(static_cast<CellIndex>(c)))
      ++d.interior_noflow;

  t0 = Clock::now();
  compute_donors(grid, ws.fg.rec, ws.fg.donor, ws.fg.dnum);
  d.timings[Phase::kDonors] = lap(t0);

  ws.plan = setup.order == OrderKind::kQueue ? generate_queue(ws.fg)
                                             : generate_stack(ws.fg);
  d.timings[Phase::kOrder] = lap(t0);

  if (setup.routing == Routing::kD8) {
    ws.accum = accumulate(ws.plan, ws.fg, params.cell_area());
  } else {
    ws.mfd = compute_mfd(elev, grid.neighborhood(), setup.mfd_exponent);
    ws.mfd_plan = generate_mfd_order(ws.mfd);
    ws.accum = accumulate_mfd(ws.mfd_plan, ws.mfd, params.cell_area());
  }
  d.timings[Phase::kAccum] = lap(t0);

  uplift(elev, params);
  d.timings[Phase::kUplift] = lap(t0);
  return d;
}

StepDiagnostics simulate_step(Raster<double>& elev, const GridGraph& grid,
                              const SimParams& params, const StepSetup& setup,
                              SimWorkspace& ws) {
  StepDiagnostics d = simulate_front(elev, grid, params, setup, ws);

  auto t0 = Clock::now();
  if (setup.order == OrderKind::kQueue) {
    d.newton_iters = erode(elev, ws.plan, ws.fg.rec, ws.accum, params, grid);
  } else {
    // Stack order interleaves sources with their trees; skip the NoFlow
    // cells instead of relying on level boundaries.
    auto ev = elev.values();
    for (CellIndex c : ws.plan.order) {
      const CellIndex r = ws.fg.rec[c];
      if (r == kNoFlow) continue;
      d.newton_iters += erode_one_cell(ev, c, r, ws.accum.values[c],
                                       grid.distance_between(c, r), params);
    }
  }
  d.timings[Phase::kErosion] = lap(t0);
  return d;
}

}  // namespace lem
