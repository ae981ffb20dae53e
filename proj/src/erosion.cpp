#include "lem/erosion.hpp"

#include <cmath>
#include <string>

#include "lem/error.hpp"

namespace lem {

void SimParams::validate() const {
  if (!(dt > 0)) throw ConfigError("dt must be > 0");
  if (!(epsilon > 0)) throw ConfigError("epsilon must be > 0");
  if (!(K >= 0)) throw ConfigError("K must be >= 0");
  if (!(n_exp > 0)) throw ConfigError("n_exp must be > 0");
  if (!(dx > 0) || !(dy > 0)) throw ConfigError("cell spacing must be > 0");
  if (max_newton_iters < 1) throw ConfigError("max_newton_iters must be >= 1");
}

NewtonResult newton_erode_cell(double h0, double hn, double F, double n_exp,
                               double eps, int max_iters) {
  double h = h0;
  double h_prev = h0;
  for (int it = 1; it <= max_iters; ++it) {
    const double diff = h - hn;
    const double residual = h - h0 + F * std::pow(diff, n_exp);
    const double slope = 1.0 + F * n_exp * std::pow(diff, n_exp - 1.0);
    h -= residual / slope;
    if (h < hn) h = hn;  // cannot erode below the receiver
    const double delta = h - h_prev;
    h_prev = h;
    if (std::abs(delta) <= eps) return {h, it, true};
  }
  return {h, max_iters, false};
}

int erode_one_cell(std::span<double> elev, CellIndex c, CellIndex r,
                   double A_c, double dist, const SimParams& params) {
  const double F = params.K * params.dt * std::pow(A_c, params.m_exp) /
                   std::pow(dist, params.n_exp);
  const NewtonResult res =
      newton_erode_cell(elev[c], elev[r], F, params.n_exp, params.epsilon,
                        params.max_newton_iters);
  if (!res.converged)
    throw ConvergenceError(
        c, "Newton iteration did not converge at cell " + std::to_string(c) +
               " after " + std::to_string(params.max_newton_iters) +
               " iterations");
  elev[c] = res.h;
  return res.iters;
}

void uplift(Raster<double>& elev, const SimParams& params) {
  const double du = params.uplift_rate * params.dt;
  const auto e = elev.values();
  for (std::size_t c = 0; c < e.size(); ++c)
    if (!elev.is_perimeter(static_cast<CellIndex>(c))) e[c] += du;
}

void uplift(Raster<double>& elev, std::span<const double> rate_field,
            double dt) {
  const auto e = elev.values();
  for (std::size_t c = 0; c < e.size(); ++c)
    if (!elev.is_perimeter(static_cast<CellIndex>(c))) e[c] += rate_field[c] * dt;
}

std::uint64_t erode(Raster<double>& elev, const TraversalPlan& plan,
                    std::span<const CellIndex> rec, const AccumField& accum,
                    const SimParams& params, const GridGraph& graph) {
  std::uint64_t total_iters = 0;
  const auto e = elev.values();
  const auto A = accum.values.values();
  for (std::size_t l = 1; l < plan.nlevels(); ++l) {
    for (std::uint32_t i = plan.level_begin(l); i < plan.level_end(l); ++i) {
      const CellIndex c = plan.order[i];
      const CellIndex r = rec[c];
      total_iters +=
          erode_one_cell(e, c, r, A[c], graph.distance_between(c, r), params);
    }
  }
  return total_iters;
}

}  // namespace lem
