#include "aggsolve/vi_solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "aggsolve/geometry.hpp"

namespace aggsolve {

namespace {

double initial_step(const FiniteGame& game) {
  // tau_0 = 1 / (1 + ||D|| + sup a / min mu): a safe inverse-Lipschitz scale
  double min_mu = 1.0;
  for (double m : game.weights()) min_mu = std::min(min_mu, m);
  double sup_a = 0.0;
  for (int i = 0; i < game.players(); ++i)
    sup_a = std::max(sup_a, CostFamily::a_of(game.params(i)));
  double D_norm = game.cost().D.jacobiSvd().singularValues()(0);
  return 1.0 / (1.0 + D_norm + sup_a / min_mu);
}

void check_finite(const Eigen::MatrixXd& G) {
  if (!G.allFinite())
    fail(ErrorKind::Convergence, "solver: operator produced NaN/Inf");
}

}  // namespace

double residual(const FiniteGame& game, const Eigen::MatrixXd& x,
                GradMode mode) {
  Eigen::MatrixXd G = operator_value(game, x, mode);
  check_finite(G);
  Eigen::MatrixXd z = project_coupled(game, x - G);
  return nu_norm(x - z, game.weights());
}

namespace {

EquilibriumResult solve_from(const FiniteGame& game, const SolverConfig& cfg,
                             Eigen::MatrixXd x) {
  const auto t_start = std::chrono::steady_clock::now();
  double tau = cfg.step ? *cfg.step : initial_step(game);
  if (tau <= 0) fail(ErrorKind::Config, "solver: step must be positive");

  EquilibriumResult out;
  int it = 0;
  double res = residual(game, x, cfg.mode);
  // proxy-gated residual checks: the true residual costs one projection
  int check_countdown = 0;
  while (res > cfg.tol && it < cfg.max_iters) {
    Eigen::MatrixXd G = operator_value(game, x, cfg.mode);
    check_finite(G);
    Eigen::MatrixXd y = project_coupled(game, x - tau * G);
    Eigen::MatrixXd Gy = operator_value(game, y, cfg.mode);
    check_finite(Gy);
    double lhs = ((G - Gy).array() * (x - y).array()).sum();
    double rhs = (x - y).squaredNorm() / (2.0 * tau);
    if (lhs > rhs && !cfg.step) {
      tau *= 0.5;
      ++it;
      continue;
    }
    Eigen::MatrixXd x_next = project_coupled(game, x - tau * Gy);
    double move = (x_next - x).norm();
    x = std::move(x_next);
    if (!cfg.step) tau *= 1.05;
    ++it;
    if (move <= cfg.tol || --check_countdown <= 0) {
      res = residual(game, x, cfg.mode);
      check_countdown = 64;
    }
  }
  res = residual(game, x, cfg.mode);

  out.profile = std::move(x);
  out.aggregate = aggregate_of(out.profile);
  out.residual = res;
  out.iterations = it;
  out.converged = res <= cfg.tol;
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t_start)
                    .count();
  return out;
}

}  // namespace

EquilibriumResult solve(const FiniteGame& game, const SolverConfig& cfg) {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(game.players(), game.dim());
  return solve_from(game, cfg, project_coupled(game, zero));
}

UniquenessReport check_unique(const FiniteGame& game, const SolverConfig& cfg,
                              int n_starts) {
  if (n_starts < 1)
    fail(ErrorKind::Config, "check_unique: n_starts must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<EquilibriumResult> results;
  for (int s = 0; s < n_starts; ++s) {
    Eigen::MatrixXd start(game.players(), game.dim());
    for (int i = 0; i < game.players(); ++i) {
      double r = game.action_set(i).radius();
      for (int t = 0; t < game.dim(); ++t) start(i, t) = r * unit(rng);
    }
    results.push_back(solve_from(game, cfg, project_coupled(game, start)));
  }

  UniquenessReport rep;
  rep.n_starts = n_starts;
  rep.all_converged = true;
  for (const auto& r : results) rep.all_converged &= r.converged;
  for (std::size_t a = 0; a < results.size(); ++a)
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      rep.profile_spread =
          std::max(rep.profile_spread,
                   nu_norm(results[a].profile - results[b].profile,
                           game.weights()));
      rep.aggregate_spread =
          std::max(rep.aggregate_spread,
                   (results[a].aggregate - results[b].aggregate).norm());
    }
  return rep;
}

}  // namespace aggsolve
