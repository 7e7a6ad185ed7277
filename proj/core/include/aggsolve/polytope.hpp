#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "aggsolve/errors.hpp"

namespace aggsolve {

enum class PolyKind { Box, SimplexBudget, General };

/// A nonempty bounded polytope {x in R^T : A x <= b}.
///
/// Construction certifies nonemptiness (a feasible point is found) and
/// boundedness (trivial recession cone), and records the radius of the
/// smallest origin-centered ball known to contain the set. Box and
/// simplex-budget instances keep their structure for fast projections.
class PolytopeSet {
 public:
  static PolytopeSet box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  /// {x >= 0, sum_t x_t = budget}
  static PolytopeSet simplex_budget(int dim, double budget);
  static PolytopeSet general(const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& b);

  int dim() const { return static_cast<int>(A_.cols()); }
  int rows() const { return static_cast<int>(A_.rows()); }
  PolyKind kind() const { return kind_; }

  const Eigen::MatrixXd& constraint_matrix() const { return A_; }
  const Eigen::VectorXd& rhs() const { return b_; }

  // Box accessors; only valid for kind() == Box.
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }
  double budget() const { return budget_; }

  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
  /// Index of a violated row, or -1 when feasible.
  int violated_row(const Eigen::VectorXd& x, double tol = 1e-9) const;

  /// The set scaled by a positive factor: m*P = {x : A x <= m*b}.
  PolytopeSet scaled(double m) const;

  /// All vertices; exact enumeration, supported for dim <= 4
  /// (boxes enumerate corners directly).
  std::vector<Eigen::VectorXd> vertices() const;

  /// Radius of the certified bounding ball N_radius(0).
  double radius() const { return radius_; }

  /// A feasible point found during certification.
  const Eigen::VectorXd& feasible_point() const { return feasible_point_; }

  /// Distance from an interior point to the boundary:
  /// min over rows of (b_k - <a_k, x>) / ||a_k||. Negative when outside.
  double boundary_distance(const Eigen::VectorXd& x) const;

 private:
  PolytopeSet() = default;
  void certify();

  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  PolyKind kind_ = PolyKind::General;
  Eigen::VectorXd lo_, hi_;  // box only
  double budget_ = 0.0;      // simplex only
  double radius_ = 0.0;
  Eigen::VectorXd feasible_point_;
};

namespace detail {
/// Vertices of {A x <= b} by basis enumeration; dim <= 4, used by
/// PolytopeSet and by the boundedness certificate.
std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b,
                                                double tol = 1e-9);
}  // namespace detail

}  // namespace aggsolve
