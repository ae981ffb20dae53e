#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <lem/config.hpp>
#include <lem/simulation.hpp>
#include <lem/strategy.hpp>

namespace lem {

/// Level-0 cells (rec = NoFlow: perimeter plus interior pits) split into
/// `workers` contiguous, balanced-by-count ranges of the ascending source
/// list. Worker w owns sources [bounds[w], bounds[w+1]) and with them the
/// entire upstream forest of each — disjoint by the single-receiver property.
struct SourcePartition {
  std::vector<CellIndex> sources;       // ascending cell index
  std::vector<std::uint32_t> bounds;    // workers+1 offsets into sources
  std::uint32_t workers() const { return static_cast<std::uint32_t>(bounds.size()) - 1; }
};

SourcePartition partition_sources(std::span<const CellIndex> rec, std::uint32_t workers);

/// Debug instrumentation: when completion_seq is non-null it is resized to N
/// and completion_seq[c] receives the global sequence number at which cell
/// c's erosion finished (kNoFlow for cells that never erode). Tests use it to
/// assert that every cell erodes after its receiver under every strategy.
struct StepInstrumentation {
  std::vector<std::uint32_t>* completion_seq = nullptr;
};

/// One timestep under the given strategy. All strategies perform the same
/// per-cell arithmetic in a dependency-respecting order, so the updated
/// elevations are bit-identical across strategies and worker counts; only
/// the timings differ. Worker counts are taken from strategy.workers.
StepDiagnostics strategy_step(Raster<double>& elev, const GridGraph& grid,
                              const SimParams& params, const StepSetup& setup,
                              const Strategy& strategy, SimWorkspace& ws,
                              const StepInstrumentation* instr = nullptr);

struct RunResult {
  Raster<double> elevation;
  std::vector<StepDiagnostics> per_step;
  PhaseTimings phase_totals;
  std::uint64_t newton_iters = 0;
  std::uint32_t interior_noflow_last = 0;
  // rb_private_queues only: cells processed by each worker in the last step
  // (the load-balance numbers surfaced by `lem bench`).
  std::vector<std::uint64_t> worker_cells;
};

/// Called after each completed step with the step index (1-based) and the
/// elevations so far; drives snapshots and progress output.
using StepCallback =
    std::function<void(std::uint32_t, const Raster<double>&, const StepDiagnostics&)>;

/// Full run on a caller-supplied initial raster (already filled/perturbed as
/// desired). cfg.width/height must match the raster.
RunResult run_simulation(Raster<double> initial, const RunConfig& cfg,
                         const StepCallback& on_step = {});

/// Convenience: generate_terrain + optional depression fill, then run.
RunResult run_simulation(const RunConfig& cfg, const StepCallback& on_step = {});

}  // namespace lem
