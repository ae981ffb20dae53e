#include <lem/scheduler.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <string>
#include <utility>

#include <lem/depressions.hpp>
#include <lem/error.hpp>
#include <lem/terrain.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lem {
namespace {

using Clock = std::chrono::steady_clock;

double lap(Clock::time_point& t0) {
  const auto t1 = Clock::now();
  const double s = std::chrono::duration<double>(t1 - t0).count();
  t0 = t1;
  return s;
}

#ifndef _OPENMP
[[maybe_unused]] int omp_get_thread_num() { return 0; }
[[maybe_unused]] int omp_get_num_threads() { return 1; }
#endif

// Exceptions must not escape a parallel region; workers deposit the first
// one here and the scheduler rethrows it at the next barrier.
class ErrorCollector {
 public:
  bool failed() const { return failed_.load(std::memory_order_relaxed); }

  void capture(const ConvergenceError& e) { store(true, e.cell(), e.what()); }
  void capture_other(const char* what) { store(false, kNoFlow, what); }

  void rethrow() const {
    if (!have_) return;
    if (convergence_) throw ConvergenceError(cell_, msg_);
    throw Error(msg_);
  }

 private:
  void store(bool convergence, CellIndex cell, const char* what) {
    std::lock_guard<std::mutex> lock(m_);
    if (have_) return;
    have_ = true;
    convergence_ = convergence;
    cell_ = cell;
    msg_ = what;
    failed_.store(true, std::memory_order_relaxed);
  }

  std::mutex m_;
  std::atomic<bool> failed_{false};
  bool have_ = false;
  bool convergence_ = true;
  CellIndex cell_ = kNoFlow;
  std::string msg_;
};

// Debug instrumentation: global completion sequence of per-cell erosions.
class Recorder {
 public:
  Recorder(std::vector<std::uint32_t>* seq, std::size_t n) : seq_(seq) {
    if (seq_) seq_->assign(n, kNoFlow);
  }
  void record(CellIndex c) {
    if (seq_) (*seq_)[c] = next_.fetch_add(1, std::memory_order_relaxed);
  }

 private:
  std::vector<std::uint32_t>* seq_;
  std::atomic<std::uint32_t> next_{0};
};

// ---- parallel phase loops ----
//
// Every loop body calls the same per-cell kernel as the serial code and
// writes only cells it owns, so results cannot depend on the thread count.

void par_receivers(const GridGraph& g, std::span<const double> elev,
                   std::span<CellIndex> rec, [[maybe_unused]] int nt) {
  const std::int64_t n = static_cast<std::int64_t>(g.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t c = 0; c < n; ++c)
    rec[c] = steepest_receiver(g, elev, static_cast<CellIndex>(c));
}

void par_donors(const GridGraph& g, std::span<const CellIndex> rec,
                std::span<CellIndex> donor, std::span<std::uint8_t> dnum,
                [[maybe_unused]] int nt) {
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  const int dmax = g.max_degree();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t c = 0; c < n; ++c)
    dnum[c] = donors_of(g, rec, static_cast<CellIndex>(c),
                        donor.data() + static_cast<std::size_t>(dmax) * c);
}

void par_uplift(const GridGraph& g, std::span<double> elev, double du,
                [[maybe_unused]] int nt) {
  const std::int64_t n = static_cast<std::int64_t>(g.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t c = 0; c < n; ++c)
    if (!g.is_boundary(static_cast<CellIndex>(c))) elev[c] += du;
}

void par_accum_d8(const TraversalPlan& plan, const FlowGraph& fg,
                  std::span<double> A, double w0, [[maybe_unused]] int nt) {
  const std::int64_t n = static_cast<std::int64_t>(A.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t c = 0; c < n; ++c) A[c] = w0;
  for (std::size_t l = plan.nlevels(); l-- > 0;) {
    const std::int64_t b = plan.level_begin(l);
    const std::int64_t e = plan.level_end(l);
#pragma omp parallel for num_threads(nt) schedule(static)
    for (std::int64_t i = b; i < e; ++i)
      add_donor_flow(A, fg.donor, fg.dnum, fg.dmax, plan.order[i]);
  }
}

void par_accum_mfd(const TraversalPlan& plan, const MfdFlowGraph& mfd,
                   std::span<double> A, double w0, [[maybe_unused]] int nt) {
  const std::int64_t n = static_cast<std::int64_t>(A.size());
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t c = 0; c < n; ++c) A[c] = w0;
  for (std::size_t l = plan.nlevels(); l-- > 0;) {
    const std::int64_t b = plan.level_begin(l);
    const std::int64_t e = plan.level_end(l);
#pragma omp parallel for num_threads(nt) schedule(static)
    for (std::int64_t i = b; i < e; ++i)
      add_mfd_donor_flow(A, mfd, plan.order[i]);
  }
}

// ---- erosion executors ----

struct ErodeCtx {
  std::span<double> elev;
  std::span<const CellIndex> rec;
  std::span<const double> A;
  const GridGraph* grid;
  const SimParams* params;
  ErrorCollector* err;
  Recorder* recorder;
};

std::uint64_t erode_cell_guarded(const ErodeCtx& ctx, CellIndex c) {
  if (ctx.err->failed()) return 0;
  try {
    const CellIndex r = ctx.rec[c];
    const int iters = erode_one_cell(ctx.elev, c, r, ctx.A[c],
                                     ctx.grid->distance_between(c, r), *ctx.params);
    ctx.recorder->record(c);
    return static_cast<std::uint64_t>(iters);
  } catch (const ConvergenceError& e) {
    ctx.err->capture(e);
  } catch (const std::exception& e) {
    ctx.err->capture_other(e.what());
  }
  return 0;
}

// Queue plan: levels after the first are mutually independent sets.
std::uint64_t erode_levels_parallel(const TraversalPlan& plan, const ErodeCtx& ctx,
                                    [[maybe_unused]] int nt) {
  std::uint64_t iters = 0;
  for (std::size_t l = 1; l < plan.nlevels(); ++l) {
    const std::int64_t b = plan.level_begin(l);
    const std::int64_t e = plan.level_end(l);
#pragma omp parallel for num_threads(nt) schedule(static) reduction(+ : iters)
    for (std::int64_t i = b; i < e; ++i)
      iters += erode_cell_guarded(ctx, plan.order[i]);
  }
  return iters;
}

// Stack plan: whole source trees are independent; tree sizes vary wildly, so
// hand trees out dynamically. No parallelism inside a tree.
std::uint64_t erode_trees_parallel(const TraversalPlan& plan, const ErodeCtx& ctx,
                                   [[maybe_unused]] int nt) {
  std::uint64_t iters = 0;
  const std::int64_t nseg = static_cast<std::int64_t>(plan.nlevels());
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1) reduction(+ : iters)
  for (std::int64_t s = 0; s < nseg; ++s) {
    for (std::uint32_t i = plan.level_begin(s); i < plan.level_end(s); ++i) {
      const CellIndex c = plan.order[i];
      if (ctx.rec[c] == kNoFlow) continue;  // the tree's source
      iters += erode_cell_guarded(ctx, c);
    }
  }
  return iters;
}

std::uint64_t erode_serial_skip(const TraversalPlan& plan, const ErodeCtx& ctx) {
  std::uint64_t iters = 0;
  for (CellIndex c : plan.order) {
    if (ctx.rec[c] == kNoFlow) continue;
    iters += erode_cell_guarded(ctx, c);
  }
  return iters;
}

void ensure_accum(AccumField& a, int w, int h, double area) {
  if (a.values.width() != w || a.values.height() != h)
    a.values = Raster<double>(w, h);
  a.cell_area = area;
}

std::uint32_t count_interior_noflow(const GridGraph& grid,
                                    std::span<const CellIndex> rec) {
  std::uint32_t count = 0;
  for (std::size_t c = 0; c < rec.size(); ++c)
    if (rec[c] == kNoFlow && !grid.is_boundary(static_cast<CellIndex>(c))) ++count;
  return count;
}

StepDiagnostics step_rb_par_all(Raster<double>& elev, const GridGraph& grid,
                                const SimParams& params, const StepSetup& setup,
                                int nt, SimWorkspace& ws, ErrorCollector& err,
                                Recorder& recorder) {
  StepDiagnostics d;
  ws.fg.resize(grid.width(), grid.height(), grid.max_degree());

  auto t0 = Clock::now();
  par_receivers(grid, elev.values(), ws.fg.rec, nt);
  d.timings[Phase::kReceivers] = lap(t0);

  d.interior_noflow = count_interior_noflow(grid, ws.fg.rec);

  t0 = Clock::now();
  par_donors(grid, ws.fg.rec, ws.fg.donor, ws.fg.dnum, nt);
  d.timings[Phase::kDonors] = lap(t0);

  ws.plan = generate_queue(ws.fg);  // inherently sequential wavefront
  d.timings[Phase::kOrder] = lap(t0);

  ensure_accum(ws.accum, grid.width(), grid.height(), params.cell_area());
  if (setup.routing == Routing::kD8) {
    par_accum_d8(ws.plan, ws.fg, ws.accum.values.values(), params.cell_area(), nt);
  } else {
    ws.mfd = compute_mfd(elev, grid.neighborhood(), setup.mfd_exponent);
    ws.mfd_plan = generate_mfd_order(ws.mfd);
    par_accum_mfd(ws.mfd_plan, ws.mfd, ws.accum.values.values(), params.cell_area(), nt);
  }
  d.timings[Phase::kAccum] = lap(t0);

  par_uplift(grid, elev.values(), params.uplift_rate * params.dt, nt);
  d.timings[Phase::kUplift] = lap(t0);

  const ErodeCtx ctx{elev.values(), ws.fg.rec,  ws.accum.values.values(),
                     &grid,         &params,    &err,
                     &recorder};
  d.newton_iters = erode_levels_parallel(ws.plan, ctx, nt);
  d.timings[Phase::kErosion] = lap(t0);
  err.rethrow();
  return d;
}

StepDiagnostics step_private_queues(Raster<double>& elev, const GridGraph& grid,
                                    const SimParams& params, std::uint32_t workers,
                                    SimWorkspace& ws, ErrorCollector& err,
                                    Recorder& recorder) {
  StepDiagnostics d;
  const std::size_t n = grid.size();
  ws.fg.resize(grid.width(), grid.height(), grid.max_degree());
  const int dmax = ws.fg.dmax;

  // Receivers need the previous step's full surface; the barrier after this
  // loop is the strategy's first synchronization point.
  auto t0 = Clock::now();
  par_receivers(grid, elev.values(), ws.fg.rec, static_cast<int>(workers));
  d.timings[Phase::kReceivers] = lap(t0);

  d.interior_noflow = count_interior_noflow(grid, ws.fg.rec);

  const SourcePartition part = partition_sources(ws.fg.rec, workers);
  ws.private_plans.resize(workers);
  ensure_accum(ws.accum, grid.width(), grid.height(), params.cell_area());
  d.worker_cells.assign(workers, 0);

  const double area = params.cell_area();
  const double du = params.uplift_rate * params.dt;
  const auto ev = elev.values();
  const auto A = ws.accum.values.values();
  const ErodeCtx ctx{ev,      ws.fg.rec, A,    &grid,
                     &params, &err,      &recorder};

  std::mutex merge_mutex;
  PhaseTimings merged{};
  std::atomic<std::uint64_t> iters{0};
  std::atomic<std::uint64_t> covered{0};

  // From here to the end of the region each worker is on its own: it builds
  // the queue over its sources' upstream forests (computing donor slots for
  // cells it owns along the way), accumulates, uplifts, and erodes those
  // cells without ever touching another worker's. The implicit barrier at
  // the region end is the single post-erosion synchronization point.
  auto worker_body = [&](std::uint32_t w) {
    Clock::time_point wt = Clock::now();
    PhaseTimings local{};

    TraversalPlan& plan = ws.private_plans[w];
    plan.order.clear();
    plan.levels.clear();
    plan.levels.push_back(0);
    for (std::uint32_t i = part.bounds[w]; i < part.bounds[w + 1]; ++i)
      plan.order.push_back(part.sources[i]);
    plan.levels.push_back(static_cast<std::uint32_t>(plan.order.size()));
    std::size_t lo = 0;
    std::size_t hi = plan.order.size();
    while (lo < hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const CellIndex c = plan.order[i];
        const std::uint8_t dn =
            donors_of(grid, ctx.rec, c, ws.fg.donor.data() + static_cast<std::size_t>(dmax) * c);
        ws.fg.dnum[c] = dn;
        for (int k = 0; k < dn; ++k)
          plan.order.push_back(ws.fg.donor[static_cast<std::size_t>(dmax) * c + k]);
      }
      lo = hi;
      hi = plan.order.size();
      if (hi > lo) plan.levels.push_back(static_cast<std::uint32_t>(hi));
    }
    local[Phase::kOrder] = lap(wt);

    for (CellIndex c : plan.order) A[c] = area;
    for (std::size_t l = plan.nlevels(); l-- > 0;) {
      for (std::uint32_t i = plan.level_begin(l); i < plan.level_end(l); ++i)
        add_donor_flow(A, ws.fg.donor, ws.fg.dnum, dmax, plan.order[i]);
    }
    local[Phase::kAccum] = lap(wt);

    for (CellIndex c : plan.order)
      if (!grid.is_boundary(c)) ev[c] += du;
    local[Phase::kUplift] = lap(wt);

    std::uint64_t it = 0;
    for (std::size_t l = 1; l < plan.nlevels(); ++l) {
      for (std::uint32_t i = plan.level_begin(l); i < plan.level_end(l); ++i)
        it += erode_cell_guarded(ctx, plan.order[i]);
    }
    local[Phase::kErosion] = lap(wt);

    iters.fetch_add(it, std::memory_order_relaxed);
    covered.fetch_add(plan.order.size(), std::memory_order_relaxed);
    d.worker_cells[w] = plan.order.size();
    {
      std::lock_guard<std::mutex> lock(merge_mutex);
      for (int p = 0; p < kNumPhases; ++p)
        merged.seconds[p] = std::max(merged.seconds[p], local.seconds[p]);
    }
  };

#ifdef _OPENMP
#pragma omp parallel num_threads(static_cast<int>(workers))
  {
    const std::uint32_t tid = static_cast<std::uint32_t>(omp_get_thread_num());
    const std::uint32_t team = static_cast<std::uint32_t>(omp_get_num_threads());
    for (std::uint32_t w = tid; w < workers; w += team) {
      try {
        worker_body(w);
      } catch (const std::exception& e) {
        err.capture_other(e.what());
      }
    }
  }
#else
  for (std::uint32_t w = 0; w < workers; ++w) worker_body(w);
#endif

  err.rethrow();
  if (covered.load() != n)
    throw StructureError("receiver graph has a cycle: private queues reached " +
                         std::to_string(covered.load()) + " of " + std::to_string(n) + " cells");

  d.timings[Phase::kOrder] = merged[Phase::kOrder];
  d.timings[Phase::kAccum] = merged[Phase::kAccum];
  d.timings[Phase::kUplift] = merged[Phase::kUplift];
  d.timings[Phase::kErosion] = merged[Phase::kErosion];
  d.newton_iters = iters.load();
  return d;
}

}  // namespace

SourcePartition partition_sources(std::span<const CellIndex> rec, std::uint32_t workers) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  SourcePartition p;
  for (std::size_t c = 0; c < rec.size(); ++c)
    if (rec[c] == kNoFlow) p.sources.push_back(static_cast<CellIndex>(c));
  const std::uint64_t total = p.sources.size();
  p.bounds.resize(workers + 1);
  for (std::uint32_t w = 0; w <= workers; ++w)
    p.bounds[w] = static_cast<std::uint32_t>(total * w / workers);
  return p;
}

StepDiagnostics strategy_step(Raster<double>& elev, const GridGraph& grid,
                              const SimParams& params, const StepSetup& setup,
                              const Strategy& strategy, SimWorkspace& ws,
                              const StepInstrumentation* instr) {
  const StrategyKind kind = strategy.kind;
  if (setup.routing == Routing::kMfd && kind == StrategyKind::kRbPrivateQueues)
    throw ConfigError(
        "rb_private_queues requires single-receiver (d8) routing: MFD upstream regions can span "
        "worker partitions");

  const int nt = static_cast<int>(std::max(1u, strategy.workers));
  Recorder recorder(instr ? instr->completion_seq : nullptr, grid.size());
  ErrorCollector err;

  StepSetup s = setup;
  s.order = uses_stack_order(kind) ? OrderKind::kStack : OrderKind::kQueue;

  switch (kind) {
    case StrategyKind::kBwSerial:
    case StrategyKind::kRbSerial: {
      if (!instr || !instr->completion_seq)
        return simulate_step(elev, grid, params, s, ws);
      StepDiagnostics d = simulate_front(elev, grid, params, s, ws);
      auto t0 = Clock::now();
      const ErodeCtx ctx{elev.values(), ws.fg.rec,  ws.accum.values.values(),
                         &grid,         &params,    &err,
                         &recorder};
      d.newton_iters = erode_serial_skip(ws.plan, ctx);
      d.timings[Phase::kErosion] = lap(t0);
      err.rethrow();
      return d;
    }

    case StrategyKind::kBwParErosion:
    case StrategyKind::kRbParErosion: {
      StepDiagnostics d = simulate_front(elev, grid, params, s, ws);
      auto t0 = Clock::now();
      const ErodeCtx ctx{elev.values(), ws.fg.rec,  ws.accum.values.values(),
                         &grid,         &params,    &err,
                         &recorder};
      d.newton_iters = kind == StrategyKind::kBwParErosion
                           ? erode_trees_parallel(ws.plan, ctx, nt)
                           : erode_levels_parallel(ws.plan, ctx, nt);
      d.timings[Phase::kErosion] = lap(t0);
      err.rethrow();
      return d;
    }

    case StrategyKind::kRbParAll:
      return step_rb_par_all(elev, grid, params, s, nt, ws, err, recorder);

    case StrategyKind::kRbPrivateQueues:
      return step_private_queues(elev, grid, params, std::max(1u, strategy.workers), ws, err,
                                 recorder);
  }
  throw ConfigError("unknown strategy kind");
}

RunResult run_simulation(Raster<double> initial, const RunConfig& cfg,
                         const StepCallback& on_step) {
  cfg.validate();
  if (initial.width() != static_cast<int>(cfg.width) ||
      initial.height() != static_cast<int>(cfg.height))
    throw ConfigError("initial raster is " + std::to_string(initial.width()) + "x" +
                      std::to_string(initial.height()) + " but config says " +
                      std::to_string(cfg.width) + "x" + std::to_string(cfg.height));
  for (std::size_t c = 0; c < initial.size(); ++c) {
    if (!std::isfinite(initial[static_cast<CellIndex>(c)]))
      throw ConfigError("input terrain has a non-finite value at cell " + std::to_string(c));
  }

  const Neighborhood nbh = Neighborhood::make(cfg.connectivity, cfg.params.dx, cfg.params.dy);
  const GridGraph grid(static_cast<int>(cfg.width), static_cast<int>(cfg.height), nbh);
  StepSetup setup;
  setup.order = uses_stack_order(cfg.strategy.kind) ? OrderKind::kStack : OrderKind::kQueue;
  setup.routing = cfg.routing;
  setup.mfd_exponent = cfg.mfd_exponent;

  RunResult res;
  res.elevation = std::move(initial);
  res.per_step.reserve(cfg.timesteps);
  SimWorkspace ws;
  for (std::uint32_t step = 1; step <= cfg.timesteps; ++step) {
    StepDiagnostics d = strategy_step(res.elevation, grid, cfg.params, setup, cfg.strategy, ws);
    res.phase_totals += d.timings;
    res.newton_iters += d.newton_iters;
    res.interior_noflow_last = d.interior_noflow;
    if (!d.worker_cells.empty()) res.worker_cells = d.worker_cells;
    if (on_step) on_step(step, res.elevation, d);
    res.per_step.push_back(std::move(d));
  }
  return res;
}

RunResult run_simulation(const RunConfig& cfg, const StepCallback& on_step) {
  cfg.validate();
  Raster<double> terrain = generate_terrain(cfg.width, cfg.height, cfg.seed);
  if (cfg.fill.mode != FillMode::kOff) terrain = priority_flood_fill(terrain, cfg.fill);
  return run_simulation(std::move(terrain), cfg, on_step);
}

}  // namespace lem
