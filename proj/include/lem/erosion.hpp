#pragma once

#include <cstdint>
#include <span>

#include "lem/accumulation.hpp"
#include "lem/grid_graph.hpp"
#include "lem/raster.hpp"
#include "lem/traversal.hpp"

namespace lem {

/// Physical and numerical constants of the stream-power model
/// dh/dt = -K * A^m * S^n with uplift u and implicit timestep dt.
struct SimParams {
  double K = 2e-6;           // erodibility
  double m_exp = 0.5;        // drainage-area exponent
  double n_exp = 1.0;        // slope exponent, > 0
  double uplift_rate = 2e-3; // elevation gain per unit time (interior cells)
  double dt = 1000.0;        // timestep length
  double epsilon = 1e-6;     // Newton step-difference tolerance
  double dx = 1.0;           // cell spacing
  double dy = 1.0;
  int max_newton_iters = 100;

  double cell_area() const { return dx * dy; }

  /// Throws ConfigError on any range violation.
  void validate() const;
};

struct NewtonResult {
  double h;
  int iters;
  bool converged;
};

/// Implicit update of one cell: solves h - h0 + F*(h - hn)^n = 0 by
/// Newton-Raphson starting from h0, stopping when successive iterates differ
/// by at most eps. Iterates are floored at hn: a cell cannot erode below its
/// receiver, and the floor keeps the n < 1 case (whose derivative blows up
/// at h = hn) well defined.
///
/// Defined once in erosion.cpp and deliberately not inlined, so every
/// execution strategy runs the exact same machine code and results stay
/// bit-identical.
NewtonResult newton_erode_cell(double h0, double hn, double F, double n_exp,
                               double eps, int max_iters);

/// Erodes cell c against its receiver r at distance dist, using drainage
/// area A_c. Writes the new elevation and returns the Newton iteration
/// count. Throws ConvergenceError (carrying c) if the cap is exceeded.
int erode_one_cell(std::span<double> elev, CellIndex c, CellIndex r,
                   double A_c, double dist, const SimParams& params);

/// Raises every interior cell by uplift_rate * dt. Perimeter cells are the
/// fixed base level and never move.
void uplift(Raster<double>& elev, const SimParams& params);

/// Spatially-varying variant: interior cell c gains rate_field[c] * dt.
void uplift(Raster<double>& elev, std::span<const double> rate_field,
            double dt);

/// Serial erosion sweep over a level-set (queue) plan: levels 1..nlevels-1
/// in order, each cell updated against its receiver's already-updated
/// elevation. Level-0 cells (perimeter and pits) are never eroded. Returns
/// total Newton iterations. Stack plans need the per-cell NoFlow check and
/// are handled by the execution strategies instead.
std::uint64_t erode(Raster<double>& elev, const TraversalPlan& plan,
                    std::span<const CellIndex> rec, const AccumField& accum,
                    const SimParams& params, const GridGraph& graph);

}  // namespace lem
