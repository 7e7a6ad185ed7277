#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aggsolve/errors.hpp"
#include "aggsolve/polytope.hpp"

namespace aggsolve {

/// Which own-gradient a finite player uses.
///   Vne    - the player accounts for her action's effect on the aggregate.
///   Pseudo - she treats the aggregate as fixed, like a nonatomic player.
enum class GradMode { Vne, Pseudo };

std::string to_string(GradMode mode);

/// Linear-quadratic cost family
///   f(x, X; s) = <x, c(X)> - u(x; s),
///   c(X) = D X + d,   u(x; s) = <b_u(s), x> - (a(s)/2) ||x||^2,
/// with parameter layout s = (a, b_u[0], ..., b_u[T-1]).
///
/// The family is smooth, so own/aggregate subdifferentials are singletons.
/// Any smooth convex cost with gradient oracles and the constants
/// (B_f, B_g, L3, alpha, beta) could replace it behind this interface.
struct CostFamily {
  Eigen::MatrixXd D;  // price slope, T x T
  Eigen::VectorXd d;  // price offset, length T

  // Filled by NonatomicGameSpec construction (they depend on the action
  // bound M and the admissible parameter range).
  double B_f = std::numeric_limits<double>::quiet_NaN();
  double B_g = std::numeric_limits<double>::quiet_NaN();
  double L3 = std::numeric_limits<double>::quiet_NaN();

  int dim() const { return static_cast<int>(d.size()); }
  int param_dim() const { return dim() + 1; }

  static double a_of(const Eigen::VectorXd& s) { return s[0]; }
  static Eigen::VectorXd b_u_of(const Eigen::VectorXd& s) {
    return s.tail(s.size() - 1);
  }

  Eigen::VectorXd price(const Eigen::VectorXd& X) const { return D * X + d; }

  /// f(x, X; s)
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& X,
               const Eigen::VectorXd& s) const;
  /// grad_x f(x, X; s) = c(X) - b_u(s) + a(s) x
  Eigen::VectorXd grad_own(const Eigen::VectorXd& x, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& s) const;
  /// grad_X f(x, X; s) = D^T x
  Eigen::VectorXd grad_agg(const Eigen::VectorXd& x) const;

  // Closed-form constants over the moduli box [0, M+1]^T and the given
  // parameter extremes (componentwise min/max of admissible s).
  double compute_B_g(double M) const;
  double compute_B_f(double M, const Eigen::VectorXd& s_min,
                     const Eigen::VectorXd& s_max) const;
  double compute_L3(double M) const;
};

/// Piecewise-affine function [0,1] -> R^T; pieces carry endpoint values,
/// so jumps at piece boundaries are representable.
class PiecewiseAffineProfile {
 public:
  struct Piece {
    double lo, hi;
    Eigen::VectorXd v0, v1;  // values at lo and hi
  };

  PiecewiseAffineProfile() = default;
  explicit PiecewiseAffineProfile(std::vector<Piece> pieces);

  /// Constant profile.
  static PiecewiseAffineProfile constant(const Eigen::VectorXd& v);

  int dim() const;
  const std::vector<Piece>& pieces() const { return pieces_; }

  Eigen::VectorXd at(double theta) const;
  /// Exact integral over [c, d] (affine integrands).
  Eigen::VectorXd integral(double c, double d) const;
  Eigen::VectorXd integral() const { return integral(0.0, 1.0); }

 private:
  std::vector<Piece> pieces_;
};

/// One maximal sub-interval of the characteristic profile on which the
/// action-set rhs b_theta and the cost parameter s_theta are affine in theta.
struct CharacteristicPiece {
  double lo, hi;
  Eigen::VectorXd b0, b1;  // rhs endpoint values
  Eigen::VectorXd s0, s1;  // cost parameter endpoint values
};

/// A nonatomic aggregative game: theta in [0,1] has action set
/// X_theta = {x : A_poly x <= b_theta} and cost f(., .; s_theta), with an
/// optional aggregate constraint X = int x_theta in A. Immutable.
class NonatomicGameSpec {
 public:
  struct Inputs {
    int T = 0;
    Eigen::MatrixXd A_poly;  // shared constraint matrix for all X_theta
    PolyKind action_kind = PolyKind::Box;
    std::vector<CharacteristicPiece> pieces;
    CostFamily cost;
    std::optional<PolytopeSet> aggregate;  // nullopt = unconstrained
    // Interior witness xbar with its slack eta; optional, but the
    // interiority constants cannot be certified without it.
    std::optional<PiecewiseAffineProfile> witness;
    double eta = 0.0;
    // Reference aggregate Y = int y for the interiority constants; defaults
    // to the witness aggregate.
    std::optional<Eigen::VectorXd> reference_aggregate;
  };

  explicit NonatomicGameSpec(Inputs in);

  int dim() const { return T_; }
  PolyKind action_kind() const { return action_kind_; }
  const Eigen::MatrixXd& action_matrix() const { return A_poly_; }
  const std::vector<CharacteristicPiece>& pieces() const { return pieces_; }
  const CostFamily& cost() const { return cost_; }
  const std::optional<PolytopeSet>& aggregate() const { return aggregate_; }
  const std::optional<PiecewiseAffineProfile>& witness() const {
    return witness_;
  }
  double eta() const { return eta_; }
  const std::optional<Eigen::VectorXd>& reference_aggregate() const {
    return reference_aggregate_;
  }

  Eigen::VectorXd b_at(double theta) const;
  Eigen::VectorXd s_at(double theta) const;
  PolytopeSet action_set_at(double theta) const;

  /// Interior discontinuity points of the characteristic profile.
  std::vector<double> breakpoints() const;

  /// Certified action bound: X_theta inside N_M(0) for all theta.
  double bound_M() const { return M_; }

  /// Componentwise extremes of s_theta over [0,1].
  const Eigen::VectorXd& s_min() const { return s_min_; }
  const Eigen::VectorXd& s_max() const { return s_max_; }

  /// The feasible aggregate set S = int X_theta dtheta; exact box for box
  /// families, conservative inner box otherwise.
  const PolytopeSet& aggregate_span() const { return span_; }
  bool aggregate_span_exact() const { return span_exact_; }

 private:
  int T_;
  Eigen::MatrixXd A_poly_;
  PolyKind action_kind_;
  std::vector<CharacteristicPiece> pieces_;
  CostFamily cost_;
  std::optional<PolytopeSet> aggregate_;
  std::optional<PiecewiseAffineProfile> witness_;
  double eta_;
  std::optional<Eigen::VectorXd> reference_aggregate_;
  double M_;
  Eigen::VectorXd s_min_, s_max_;
  PolytopeSet span_;
  bool span_exact_;
};

/// Provenance of one finite player: the theta-cells she represents.
struct ProvenanceCell {
  std::vector<std::pair<double, double>> intervals;
  double measure = 0.0;
  double rep_theta = 0.0;  // representative (midpoint for uniform splits)
};

/// One element G^nu(A^nu) of an atomic approximating sequence: I weighted
/// players with scaled action polytopes and scaled costs
///   f_i(x_i, X) = mu_i f(x_i / mu_i, X; s_bar_i).
class FiniteGame {
 public:
  FiniteGame(int T, std::vector<double> mu, std::vector<PolytopeSet> sets,
             std::vector<Eigen::VectorXd> s_bar, CostFamily cost,
             std::optional<PolytopeSet> aggregate,
             std::vector<ProvenanceCell> cells);

  int dim() const { return T_; }
  int players() const { return static_cast<int>(mu_.size()); }
  const std::vector<double>& weights() const { return mu_; }
  double weight(int i) const { return mu_[i]; }
  double max_weight() const;
  const PolytopeSet& action_set(int i) const { return sets_[i]; }
  const Eigen::VectorXd& params(int i) const { return s_bar_[i]; }
  const CostFamily& cost() const { return cost_; }
  const std::optional<PolytopeSet>& aggregate() const { return aggregate_; }
  const std::vector<ProvenanceCell>& cells() const { return cells_; }
  bool has_provenance() const { return !cells_.empty(); }

  /// Profile feasibility against every player's set (tol per coordinate
  /// constraint); throws naming the violated player and row.
  void require_feasible(const Eigen::MatrixXd& x, double tol = 1e-9) const;

 private:
  int T_;
  std::vector<double> mu_;
  std::vector<PolytopeSet> sets_;
  std::vector<Eigen::VectorXd> s_bar_;
  CostFamily cost_;
  std::optional<PolytopeSet> aggregate_;
  std::vector<ProvenanceCell> cells_;
};

/// Column sums of an I x T profile: the aggregate action X.
Eigen::VectorXd aggregate_of(const Eigen::MatrixXd& x);

/// Player i's cost at profile x (I x T): mu_i f(x_i/mu_i, X; s_bar_i).
/// Requires x feasible to 1e-9.
double eval_cost(const FiniteGame& game, int i, const Eigen::MatrixXd& x);

/// Same with the aggregate supplied explicitly; no feasibility check.
double eval_cost_with_aggregate(const FiniteGame& game, int i,
                                const Eigen::VectorXd& x_i,
                                const Eigen::VectorXd& X);

/// Own-action gradient of player i at profile x.
/// Vne: grad of x_i -> f_i(x_i, x_i + X_{-i}); Pseudo: grad_1 f_i(x_i, X).
/// The two differ by D^T x_i, of norm at most mu_i * B_g.
Eigen::VectorXd grad_own(const FiniteGame& game, int i,
                         const Eigen::MatrixXd& x, GradMode mode);

/// The stacked VI operator G(x) = (grad_own(game, i, x, mode))_i, I x T.
Eigen::MatrixXd operator_value(const FiniteGame& game, const Eigen::MatrixXd& x,
                               GradMode mode);

/// Profile x^hat with its aggregate and solver telemetry.
struct EquilibriumResult {
  Eigen::MatrixXd profile;    // I x T
  Eigen::VectorXd aggregate;  // column sums of profile
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

}  // namespace aggsolve
