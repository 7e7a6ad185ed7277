#pragma once

#include <cstdint>
#include <optional>

#include "aggsolve/game_model.hpp"

namespace aggsolve {

struct SolverConfig {
  std::optional<double> step;  // fixed tau; nullopt = adaptive
  double tol = 1e-8;           // natural-residual threshold
  int max_iters = 100000;
  GradMode mode = GradMode::Vne;
  std::uint64_t seed = 0;  // random initialization (check_unique only)
};

/// Natural residual ||x - Pi(x - G(x))||_nu with reference step 1;
/// zero exactly at solutions of the VI over X(A^nu).
double residual(const FiniteGame& game, const Eigen::MatrixXd& x, GradMode mode);

/// Solve the VI  <G(x^hat), x - x^hat> >= 0 for all x in X(A^nu)  by the
/// extragradient method
///   y = Pi(x - tau G(x)),  x+ = Pi(x - tau G(y)),
/// with projections by project_coupled. The adaptive step halves whenever
/// <G(x) - G(y), x - y> > ||x - y||^2 / (2 tau) and grows by 1.05 after an
/// accepted step. Deterministic start at Pi(0).
EquilibriumResult solve(const FiniteGame& game, const SolverConfig& cfg);

struct UniquenessReport {
  int n_starts = 0;
  double profile_spread = 0.0;    // max pairwise nu-norm distance
  double aggregate_spread = 0.0;  // max pairwise aggregate distance
  bool all_converged = false;
};

/// Re-solve from n_starts random feasible points and report the solution
/// spread. Strictly monotone instances should collapse the profile spread,
/// aggregatively strictly monotone ones the aggregate spread.
UniquenessReport check_unique(const FiniteGame& game, const SolverConfig& cfg,
                              int n_starts);

}  // namespace aggsolve
