#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aggsolve/game_model.hpp"
#include "aggsolve/polytope.hpp"

namespace aggsolve {

/// Euclidean projection onto a polytope. Boxes clamp, simplex-budget sets
/// use the sorting algorithm, general sets solve the projection QP exactly
/// by active-set enumeration (dim <= 4).
Eigen::VectorXd project_polytope(const PolytopeSet& P, const Eigen::VectorXd& y);

struct CoupledProjectionOptions {
  double gap_tol = 1e-10;
  int max_iters = 10000;
};

/// Euclidean projection of a profile y (I x T) onto
/// X(A^nu) = {x in prod X_i : sum_i x_i in A^nu},
/// by Dykstra alternation between C1 = prod X_i and
/// C2 = {x : sum_i x_i in A}; the C2 projection has the closed form
/// x_i = y_i + (P_A(Y) - Y)/I with Y = sum_i y_i.
/// Without an aggregate constraint this reduces to componentwise projection.
Eigen::MatrixXd project_coupled(const FiniteGame& game, const Eigen::MatrixXd& y,
                                const CoupledProjectionOptions& opts = {});

/// Hausdorff distance between two polytopes (same ambient dimension).
/// Exact: the farthest point of P from Q is a vertex of P since d(., Q) is
/// convex. Box pairs use a closed per-coordinate form; otherwise vertex
/// enumeration (dim <= 4).
double hausdorff(const PolytopeSet& P, const PolytopeSet& Q);

/// The nu-norm ||x||_nu = (sum_i ||x_i||^2 / mu_i)^(1/2) on profiles.
double nu_norm(const Eigen::MatrixXd& x, const std::vector<double>& mu);

/// A piecewise-constant element of L^2([0,1], R^T).
class StepProfile {
 public:
  StepProfile(std::vector<double> breakpoints, Eigen::MatrixXd values);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const Eigen::MatrixXd& values() const { return values_; }
  int segments() const { return static_cast<int>(values_.rows()); }
  int dim() const { return static_cast<int>(values_.cols()); }

  Eigen::VectorXd at(double theta) const;
  /// L2 norm: (sum_i (t_i - t_{i-1}) ||v_i||^2)^(1/2).
  double l2_norm() const;

 private:
  std::vector<double> breakpoints_;  // 0 = t_0 < ... < t_n = 1
  Eigen::MatrixXd values_;           // n x T
};

/// The embedding psi^nu: the nonatomic profile dictated to the coalition,
/// x_i / mu_i on each cell Theta_i. Requires builder provenance.
StepProfile psi(const FiniteGame& game, const Eigen::MatrixXd& x);

/// The coalition aggregator psi_bar^nu: cell integrals of a nonatomic
/// profile, one row per cell (exact for affine and step integrands).
Eigen::MatrixXd psi_bar(const PiecewiseAffineProfile& x,
                        const std::vector<ProvenanceCell>& cells);
Eigen::MatrixXd psi_bar(const StepProfile& x,
                        const std::vector<ProvenanceCell>& cells);

}  // namespace aggsolve
