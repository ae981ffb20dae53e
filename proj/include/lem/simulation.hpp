#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <lem/accumulation.hpp>
#include <lem/config.hpp>
#include <lem/erosion.hpp>
#include <lem/flow_graph.hpp>
#include <lem/grid_graph.hpp>
#include <lem/mfd.hpp>
#include <lem/traversal.hpp>

namespace lem {

// One slot per pipeline phase, in step order.
enum class Phase : int { kReceivers, kDonors, kOrder, kAccum, kUplift, kErosion };
inline constexpr int kNumPhases = 6;
inline constexpr std::array<std::string_view, kNumPhases> kPhaseNames = {
    "receivers", "donors", "order", "accum", "uplift", "erosion"};

/// Wall-clock seconds spent in each phase.
struct PhaseTimings {
  std::array<double, kNumPhases> seconds{};

  double& operator[](Phase p) { return seconds[static_cast<int>(p)]; }
  double operator[](Phase p) const { return seconds[static_cast<int>(p)]; }
  double total() const;
  PhaseTimings& operator+=(const PhaseTimings& o);
};

struct StepDiagnostics {
  PhaseTimings timings;
  std::uint64_t newton_iters = 0;
  std::uint32_t interior_noflow = 0;  // interior pits seen by this step
  // rb_private_queues only: cells processed by each worker (sums to N).
  std::vector<std::uint64_t> worker_cells;
};

/// Scratch state reused across timesteps (allocations happen once).
struct SimWorkspace {
  FlowGraph fg;
  TraversalPlan plan;
  AccumField accum;
  MfdFlowGraph mfd;
  TraversalPlan mfd_plan;
  // rb_private_queues: one plan per worker, built fresh each step but with
  // storage kept across steps.
  std::vector<TraversalPlan> private_plans;
};

enum class OrderKind { kQueue, kStack };

struct StepSetup {
  OrderKind order = OrderKind::kQueue;
  Routing routing = Routing::kD8;
  double mfd_exponent = 1.0;
};

/// Serial front of a timestep: receivers -> donors -> order -> accumulation
/// -> uplift, updating elev in place and filling ws. With Routing::kMfd the
/// accumulation phase routes area through the MFD graph while the plan and
/// rec arrays stay D8 (erosion always follows the single steepest receiver).
/// The returned diagnostics carry the front-phase timings; erosion is left
/// to the caller (the execution strategies differ only there and in which
/// front phases they parallelize).
StepDiagnostics simulate_front(Raster<double>& elev, const GridGraph& grid,
                               const SimParams& params, const StepSetup& setup,
                               SimWorkspace& ws);

/// One full serial timestep: simulate_front plus the serial erosion sweep.
///
/// This is the reference implementation; the parallel strategies replay the
/// same arithmetic phase by phase and must match it bit for bit.
StepDiagnostics simulate_step(Raster<double>& elev, const GridGraph& grid,
                              const SimParams& params, const StepSetup& setup,
                              SimWorkspace& ws);

}  // namespace lem
