#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aggsolve/game_model.hpp"

namespace aggsolve {

/// AAS quality metrics of one finite game against its nonatomic spec:
///   delta  - max_i sup_theta d_H(X_theta, X_i / mu_i)  (action-set drift)
///   lambda - max_i mu_i B_g                     (own-aggregate-impact gap)
///   d_sub  - max_i L3 sup_theta ||s_theta - s_bar_i||  (subdifferential gap)
///   D_cap  - d_H(A^nu, A)                       (constraint drift)
/// Sup-over-cell terms are evaluated at cell endpoints plus a Lipschitz
/// slack C0 * osc(b); under-estimates would void the error bounds, so every
/// term is a certified upper bound.
struct AASMetrics {
  double delta = 0.0;
  double lambda = 0.0;
  double d_sub = 0.0;
  double D_cap = 0.0;
  std::vector<double> cell_delta;
  std::vector<double> cell_d;
  double slack_C0 = 1.0;
  int endpoint_samples = 0;
};

/// The constants entering the convergence bounds, with the interiority
/// constants rho, rho_bar built from the witness profile per the
/// construction behind the bounds (rho = eta/(9M) * dist, rho_bar = dist/3
/// at the pulled-in aggregate).
struct GameConstants {
  double M = 0.0;
  double B_f = 0.0;
  double B_g = 0.0;
  double L3 = 0.0;
  double alpha = 0.0;  // inf a(s): strong concavity of the private utility
  double beta = 0.0;   // lambda_min of sym(D): aggregate strong monotonicity
  double eta = 0.0;
  double rho = 0.0;
  double rho_bar = 0.0;
  double K_A = 0.0;  // (M+1)/min(rho, rho_bar)
  std::string provenance;
};

AASMetrics compute_metrics(const NonatomicGameSpec& spec,
                           const FiniteGame& game);

GameConstants compute_constants(const NonatomicGameSpec& spec);

struct BoundResult {
  double value = 0.0;
  bool valid = false;   // applicability gate max(delta, D) < min(rho, rho_bar)
  double gate_lhs = 0.0;
  double gate_rhs = 0.0;
};

/// Aggregate-error bound:
///   ||X^nu - X*||^2 <= (1/beta) [ (3 B_f + 1) K_A max(D, delta)
///                                 + (2M + 1)(d_sub + lambda) ].
/// Unconstrained games replace K_A and D by zero (and gate trivially).
BoundResult bound_aggregate(const AASMetrics& m, const GameConstants& c,
                            bool constrained);

/// Profile-error bound: same expression over alpha; pseudo-mode sweeps drop
/// the lambda term (finite players already ignore their aggregate impact).
BoundResult bound_profile(const AASMetrics& m, const GameConstants& c,
                          bool constrained, GradMode mode);

struct MonotonicityReport {
  int n_pairs = 0;
  double min_gap = 0.0;           //  min <G(x)-G(y), x-y>
  double min_alpha_margin = 0.0;  //  min gap - alpha ||x-y||^2
  double min_beta_margin = 0.0;   //  min gap - beta ||X-Y||^2
  double alpha = 0.0, beta = 0.0;
  bool pass(double tol = 1e-9) const {
    return min_gap >= -tol && min_alpha_margin >= -tol &&
           min_beta_margin >= -tol;
  }
};

/// Stochastic monotonicity certificate on the nonatomic game: exact
/// operator-gap integrals over random piecewise-constant profile pairs
/// (half of them coherent shifts, which expose aggregate-driven
/// non-monotonicity that independent sampling misses).
MonotonicityReport check_monotone(const NonatomicGameSpec& spec, int n_pairs,
                                  std::uint64_t seed);

/// Same certificate on a finite game; the gap uses the plain R^{IT} inner
/// product, which equals the L^2 gap of the embedded profiles, and the
/// alpha term uses the nu-norm accordingly.
MonotonicityReport check_monotone(const FiniteGame& game, GradMode mode,
                                  int n_pairs, std::uint64_t seed);

}  // namespace aggsolve
