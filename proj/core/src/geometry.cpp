#include "aggsolve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aggsolve {

namespace {

Eigen::VectorXd project_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                            const Eigen::VectorXd& y) {
  return y.cwiseMax(lo).cwiseMin(hi);
}

// Projection onto {x >= 0, sum x = budget} (Held/Wolfe/Crowder style):
// x_t = max(y_t - tau, 0) with tau chosen so the budget holds.
Eigen::VectorXd project_simplex(double budget, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int k = 0;
  for (int j = 0; j < n; ++j) {
    cum += u[j];
    double cand = (cum - budget) / (j + 1);
    if (cand < u[j]) {
      tau = cand;
      k = j + 1;
    }
  }
  (void)k;
  return (y.array() - tau).cwiseMax(0.0).matrix();
}

// Exact projection QP by active-set enumeration: for every row subset of
// size <= T solve the equality-constrained projection, then keep feasible
// candidates and certify optimality variationally on the vertex set.
Eigen::VectorXd project_general(const PolytopeSet& P, const Eigen::VectorXd& y) {
  if (P.contains(y, 1e-12)) return y;
  const Eigen::MatrixXd& A = P.constraint_matrix();
  const Eigen::VectorXd& b = P.rhs();
  const int T = P.dim();
  const int p = P.rows();
  if (T > 4)
    fail(ErrorKind::Geometry,
         "project: general polytopes supported for dimension <= 4");

  const auto verts = P.vertices();
  auto certify = [&](const Eigen::VectorXd& x) {
    if (!P.contains(x, 1e-9)) return false;
    // <y - x, z - x> <= tol for all z in P; linear in z, so vertex checks
    // suffice
    for (const auto& z : verts)
      if ((y - x).dot(z - x) > 1e-9 * (1.0 + y.norm())) return false;
    return true;
  };

  std::vector<int> subset;
  Eigen::VectorXd best;
  double best_dist = std::numeric_limits<double>::infinity();
  // iterate subsets of rows, sizes 0..T, via an explicit stack
  std::vector<std::vector<int>> stack = {{}};
  while (!stack.empty()) {
    std::vector<int> S = std::move(stack.back());
    stack.pop_back();
    if (!S.empty()) {
      const int m = static_cast<int>(S.size());
      Eigen::MatrixXd As(m, T);
      Eigen::VectorXd bs(m);
      for (int j = 0; j < m; ++j) {
        As.row(j) = A.row(S[j]);
        bs[j] = b[S[j]];
      }
      // x = y - As^T lam,  As x = bs  =>  (As As^T) lam = As y - bs
      Eigen::MatrixXd M = As * As.transpose();
      Eigen::VectorXd rhs = As * y - bs;
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
      Eigen::VectorXd lam = cod.solve(rhs);
      if ((M * lam - rhs).lpNorm<Eigen::Infinity>() < 1e-9) {
        Eigen::VectorXd x = y - As.transpose() * lam;
        double dist = (x - y).norm();
        if (dist < best_dist && certify(x)) {
          best_dist = dist;
          best = x;
        }
      }
    }
    int start = S.empty() ? 0 : S.back() + 1;
    if (static_cast<int>(S.size()) < T)
      for (int r = start; r < p; ++r) {
        auto S2 = S;
        S2.push_back(r);
        stack.push_back(std::move(S2));
      }
  }
  if (best.size() == 0)
    fail(ErrorKind::Geometry,
         "project: no active-set candidate certified (degenerate polytope?)");
  return best;
}

}  // namespace

Eigen::VectorXd project_polytope(const PolytopeSet& P,
                                 const Eigen::VectorXd& y) {
  if (y.size() != P.dim())
    fail(ErrorKind::Dimension, "project: point dimension != set dimension");
  switch (P.kind()) {
    case PolyKind::Box:
      return project_box(P.lo(), P.hi(), y);
    case PolyKind::SimplexBudget:
      return project_simplex(P.budget(), y);
    case PolyKind::General:
      return project_general(P, y);
  }
  fail(ErrorKind::Geometry, "project: unknown polytope kind");
}

Eigen::MatrixXd project_coupled(const FiniteGame& game, const Eigen::MatrixXd& y,
                                const CoupledProjectionOptions& opts) {
  const int I = game.players();
  const int T = game.dim();
  if (y.rows() != I || y.cols() != T)
    fail(ErrorKind::Dimension, "project_coupled: profile shape mismatch");

  auto project_players = [&](const Eigen::MatrixXd& v) {
    Eigen::MatrixXd out(I, T);
    for (int i = 0; i < I; ++i)
      out.row(i) =
          project_polytope(game.action_set(i), v.row(i).transpose()).transpose();
    return out;
  };

  if (!game.aggregate()) return project_players(y);
  const PolytopeSet& A = *game.aggregate();

  auto project_sum = [&](const Eigen::MatrixXd& v) {
    Eigen::VectorXd Y = aggregate_of(v);
    Eigen::VectorXd shift = (project_polytope(A, Y) - Y) / I;
    Eigen::MatrixXd out = v;
    out.rowwise() += shift.transpose();
    return out;
  };

  Eigen::MatrixXd x = y;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(I, T);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(I, T);
  double gap = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    Eigen::MatrixXd u = project_players(x + p);
    p = x + p - u;
    Eigen::MatrixXd next = project_sum(u + q);
    q = u + q - next;
    gap = (next - x).norm();
    x = next;
    if (gap < opts.gap_tol) {
      Eigen::VectorXd X = aggregate_of(x);
      bool players_ok = true;
      for (int i = 0; i < I && players_ok; ++i)
        players_ok = game.action_set(i).contains(x.row(i).transpose(), 1e-8);
      if (players_ok && A.contains(X, 1e-8)) return x;
    }
  }
  fail(ErrorKind::Convergence,
       "project_coupled: Dykstra did not converge in " +
           std::to_string(opts.max_iters) + " iterations (last gap " +
           std::to_string(gap) + "); the aggregate constraint may be "
           "ill-conditioned");
}

namespace {

double directed_hausdorff_boxes(const PolytopeSet& P, const PolytopeSet& Q) {
  // farthest point of P from Q is a corner; per-coordinate gaps are
  // independent, so pick the worse endpoint per coordinate
  double acc = 0.0;
  for (int t = 0; t < P.dim(); ++t) {
    auto gap = [&](double v) {
      return std::max({Q.lo()[t] - v, v - Q.hi()[t], 0.0});
    };
    double g = std::max(gap(P.lo()[t]), gap(P.hi()[t]));
    acc += g * g;
  }
  return std::sqrt(acc);
}

double directed_hausdorff(const PolytopeSet& P, const PolytopeSet& Q) {
  double best = 0.0;
  for (const auto& v : P.vertices())
    best = std::max(best, (v - project_polytope(Q, v)).norm());
  return best;
}

}  // namespace

double hausdorff(const PolytopeSet& P, const PolytopeSet& Q) {
  if (P.dim() != Q.dim())
    fail(ErrorKind::Dimension, "hausdorff: ambient dimensions differ");
  if (P.kind() == PolyKind::Box && Q.kind() == PolyKind::Box)
    return std::max(directed_hausdorff_boxes(P, Q),
                    directed_hausdorff_boxes(Q, P));
  if (P.dim() > 4)
    fail(ErrorKind::Geometry,
         "hausdorff: vertex enumeration capped at dimension 4; use the box "
         "fast path or a sampled bound");
  return std::max(directed_hausdorff(P, Q), directed_hausdorff(Q, P));
}

double nu_norm(const Eigen::MatrixXd& x, const std::vector<double>& mu) {
  if (x.rows() != static_cast<Eigen::Index>(mu.size()))
    fail(ErrorKind::Dimension, "nu_norm: profile rows != weight count");
  double acc = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    if (mu[i] <= 0.0) fail(ErrorKind::Dimension, "nu_norm: weights must be > 0");
    acc += x.row(i).squaredNorm() / mu[i];
  }
  return std::sqrt(acc);
}

StepProfile::StepProfile(std::vector<double> breakpoints, Eigen::MatrixXd values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() != static_cast<std::size_t>(values_.rows()) + 1)
    fail(ErrorKind::Dimension,
         "step profile: need exactly one more breakpoint than value rows");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (breakpoints_[i + 1] <= breakpoints_[i])
      fail(ErrorKind::Config,
           "step profile: breakpoints must be strictly increasing");
}

Eigen::VectorXd StepProfile::at(double theta) const {
  for (int i = 0; i < segments(); ++i)
    if (theta < breakpoints_[i + 1] || i + 1 == segments())
      return values_.row(i).transpose();
  return values_.row(segments() - 1).transpose();
}

double StepProfile::l2_norm() const {
  double acc = 0.0;
  for (int i = 0; i < segments(); ++i)
    acc += (breakpoints_[i + 1] - breakpoints_[i]) * values_.row(i).squaredNorm();
  return std::sqrt(acc);
}

StepProfile psi(const FiniteGame& game, const Eigen::MatrixXd& x) {
  if (!game.has_provenance())
    fail(ErrorKind::Config, "psi: game carries no builder provenance");
  if (x.rows() != game.players() || x.cols() != game.dim())
    fail(ErrorKind::Dimension, "psi: profile shape mismatch");

  struct Seg {
    double lo, hi;
    int player;
  };
  std::vector<Seg> segs;
  for (int i = 0; i < game.players(); ++i)
    for (const auto& [lo, hi] : game.cells()[i].intervals)
      segs.push_back({lo, hi, i});
  std::sort(segs.begin(), segs.end(),
            [](const Seg& a, const Seg& b) { return a.lo < b.lo; });

  std::vector<double> bp;
  Eigen::MatrixXd vals(static_cast<int>(segs.size()), game.dim());
  bp.push_back(segs.front().lo);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    bp.push_back(segs[k].hi);
    vals.row(static_cast<int>(k)) =
        x.row(segs[k].player) / game.weight(segs[k].player);
  }
  return StepProfile(std::move(bp), std::move(vals));
}

Eigen::MatrixXd psi_bar(const PiecewiseAffineProfile& x,
                        const std::vector<ProvenanceCell>& cells) {
  Eigen::MatrixXd out(static_cast<int>(cells.size()), x.dim());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.dim());
    for (const auto& [lo, hi] : cells[i].intervals) acc += x.integral(lo, hi);
    out.row(static_cast<int>(i)) = acc.transpose();
  }
  return out;
}

Eigen::MatrixXd psi_bar(const StepProfile& x,
                        const std::vector<ProvenanceCell>& cells) {
  Eigen::MatrixXd out(static_cast<int>(cells.size()), x.dim());
  const auto& bp = x.breakpoints();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.dim());
    for (const auto& [lo, hi] : cells[i].intervals)
      for (int s = 0; s < x.segments(); ++s) {
        double a = std::max(lo, bp[s]), b = std::min(hi, bp[s + 1]);
        if (b > a) acc += (b - a) * x.values().row(s).transpose();
      }
    out.row(static_cast<int>(i)) = acc.transpose();
  }
  return out;
}

}  // namespace aggsolve
