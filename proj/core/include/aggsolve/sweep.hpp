#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aggsolve/game_model.hpp"
#include "aggsolve/metrics.hpp"
#include "aggsolve/oracle.hpp"
#include "aggsolve/vi_solver.hpp"

namespace aggsolve {

/// One row of the convergence experiment: build the nu-th AAS element,
/// solve it, measure the AAS metrics and the theorem bounds, and compare
/// against the oracle equilibrium.
struct SweepRow {
  int nu = 0;
  int I = 0;
  double mu_max = 0.0;
  double delta = 0.0, d_sub = 0.0, lambda = 0.0, D_cap = 0.0;
  bool gate_ok = false;
  double bound_agg = 0.0, err_agg_sq = 0.0;
  double bound_prof = 0.0, err_prof_sq = 0.0;
  double residual = 0.0;
  int iters = 0;
  double wall_ms = 0.0;
  GradMode mode = GradMode::Vne;
  std::uint64_t seed = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct SweepOptions {
  GradMode mode = GradMode::Vne;
  std::string method = "uniform";
  bool add_theta_axis = false;
  SolverConfig solver;
  int threads = 0;  // <= 0: AGGSOLVE_THREADS, else hardware concurrency
};

/// Rows may be computed concurrently (independent immutable inputs); the
/// result vector is ordered by the nu list regardless of scheduling.
std::vector<SweepRow> run_sweep(const NonatomicGameSpec& spec,
                                const std::vector<int>& nus,
                                const SweepOptions& opts);

/// One row against a prebuilt game (used when re-ingesting cmd_build output).
SweepRow run_sweep_row(const NonatomicGameSpec& spec, const FiniteGame& game,
                       int nu, const SweepOptions& opts);

std::string csv_header();
void write_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace aggsolve
