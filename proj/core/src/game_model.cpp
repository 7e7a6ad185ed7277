#include "aggsolve/game_model.hpp"

#include <algorithm>
#include <cmath>

namespace aggsolve {

std::string to_string(GradMode mode) {
  return mode == GradMode::Vne ? "vne" : "pseudo";
}

double CostFamily::value(const Eigen::VectorXd& x, const Eigen::VectorXd& X,
                         const Eigen::VectorXd& s) const {
  const double a = a_of(s);
  const Eigen::VectorXd bu = b_u_of(s);
  return x.dot(price(X)) - (bu.dot(x) - 0.5 * a * x.squaredNorm());
}

Eigen::VectorXd CostFamily::grad_own(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& s) const {
  return price(X) - b_u_of(s) + a_of(s) * x;
}

Eigen::VectorXd CostFamily::grad_agg(const Eigen::VectorXd& x) const {
  return D.transpose() * x;
}

double CostFamily::compute_B_g(double M) const {
  // sup of ||D^T x|| over the box [0, M+1]^T; convex, attained at a corner.
  const int T = dim();
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << T); ++mask) {
    Eigen::VectorXd v(T);
    for (int t = 0; t < T; ++t) v[t] = ((mask >> t) & 1) ? M + 1.0 : 0.0;
    best = std::max(best, (D.transpose() * v).norm());
  }
  return best;
}

double CostFamily::compute_B_f(double M, const Eigen::VectorXd& s_min,
                               const Eigen::VectorXd& s_max) const {
  const int T = dim();
  const double box_norm = (M + 1.0) * std::sqrt(static_cast<double>(T));
  const double D_norm = D.jacobiSvd().singularValues()(0);
  double sup_a = std::max(std::abs(s_min[0]), std::abs(s_max[0]));
  double sup_bu = 0.0;
  for (int t = 1; t <= T; ++t)
    sup_bu += std::pow(std::max(std::abs(s_min[t]), std::abs(s_max[t])), 2);
  sup_bu = std::sqrt(sup_bu);
  return D_norm * box_norm + d.norm() + sup_bu + sup_a * box_norm;
}

double CostFamily::compute_L3(double M) const {
  // ||grad_1 f(x,Y;s) - grad_1 f(x,Y;s')|| = ||(b_u(s')-b_u(s)) + (a(s)-a(s'))x||
  //   <= sqrt(1 + ||x||^2) ||s - s'||, with ||x|| <= (M+1) sqrt(T) on the box.
  const double n = (M + 1.0) * std::sqrt(static_cast<double>(dim()));
  return std::sqrt(1.0 + n * n);
}

PiecewiseAffineProfile::PiecewiseAffineProfile(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty())
    fail(ErrorKind::Config, "profile: needs at least one piece");
  double cursor = 0.0;
  for (const auto& p : pieces_) {
    if (std::abs(p.lo - cursor) > 1e-12 || p.hi <= p.lo)
      fail(ErrorKind::Config, "profile: pieces must partition [0,1]");
    if (p.v0.size() != p.v1.size() || p.v0.size() != pieces_[0].v0.size())
      fail(ErrorKind::Dimension, "profile: inconsistent value dimensions");
    cursor = p.hi;
  }
  if (std::abs(cursor - 1.0) > 1e-12)
    fail(ErrorKind::Config, "profile: pieces must end at theta = 1");
}

PiecewiseAffineProfile PiecewiseAffineProfile::constant(
    const Eigen::VectorXd& v) {
  return PiecewiseAffineProfile({Piece{0.0, 1.0, v, v}});
}

int PiecewiseAffineProfile::dim() const {
  return static_cast<int>(pieces_[0].v0.size());
}

Eigen::VectorXd PiecewiseAffineProfile::at(double theta) const {
  for (const auto& p : pieces_) {
    if (theta < p.lo - 1e-12) continue;
    if (theta <= p.hi + 1e-12 || &p == &pieces_.back()) {
      double t = (p.hi > p.lo) ? (theta - p.lo) / (p.hi - p.lo) : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      return p.v0 + t * (p.v1 - p.v0);
    }
  }
  return pieces_.back().v1;
}

Eigen::VectorXd PiecewiseAffineProfile::integral(double c, double d) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim());
  if (d <= c) return acc;
  for (const auto& p : pieces_) {
    double lo = std::max(c, p.lo), hi = std::min(d, p.hi);
    if (hi <= lo) continue;
    // affine segment: trapezoid over [lo, hi]
    double t0 = (lo - p.lo) / (p.hi - p.lo), t1 = (hi - p.lo) / (p.hi - p.lo);
    Eigen::VectorXd vlo = p.v0 + t0 * (p.v1 - p.v0);
    Eigen::VectorXd vhi = p.v0 + t1 * (p.v1 - p.v0);
    acc += 0.5 * (hi - lo) * (vlo + vhi);
  }
  return acc;
}

namespace {

// Max vertex norm of {A x <= b(theta)} over one characteristic piece.
// For boxes, vertex coordinates are affine in theta and the norm is convex,
// so the max over the piece is attained at the piece endpoints.
double piece_action_bound(const Eigen::MatrixXd& A, PolyKind kind,
                          const CharacteristicPiece& piece) {
  auto bound_at = [&](const Eigen::VectorXd& b) {
    double r = 0.0;
    if (kind == PolyKind::Box) {
      const int T = static_cast<int>(A.cols());
      Eigen::VectorXd hi = b.head(T), lo = -b.tail(T);
      double r2 = 0.0;
      for (int t = 0; t < T; ++t)
        r2 += std::max(lo[t] * lo[t], hi[t] * hi[t]);
      return std::sqrt(r2);
    }
    for (const auto& v : detail::enumerate_vertices(A, b))
      r = std::max(r, v.norm());
    return r;
  };
  double m = std::max(bound_at(piece.b0), bound_at(piece.b1));
  if (kind != PolyKind::Box) {
    // general polytopes: basis sensitivity slack against rhs drift between
    // the endpoints
    m += (piece.b1 - piece.b0).norm();
  }
  return m;
}

}  // namespace

NonatomicGameSpec::NonatomicGameSpec(Inputs in)
    : T_(in.T),
      A_poly_(std::move(in.A_poly)),
      action_kind_(in.action_kind),
      pieces_(std::move(in.pieces)),
      cost_(std::move(in.cost)),
      aggregate_(std::move(in.aggregate)),
      witness_(std::move(in.witness)),
      eta_(in.eta),
      reference_aggregate_(std::move(in.reference_aggregate)),
      span_(PolytopeSet::box(Eigen::VectorXd::Zero(1),
                             Eigen::VectorXd::Zero(1))),
      span_exact_(false) {
  if (T_ <= 0) fail(ErrorKind::Config, "spec: dimension T must be >= 1");
  if (A_poly_.cols() != T_)
    fail(ErrorKind::Dimension, "spec: A_poly column count != T");
  if (cost_.dim() != T_)
    fail(ErrorKind::Dimension, "spec: cost family dimension != T");
  if (pieces_.empty()) fail(ErrorKind::Config, "spec: empty profile");
  double cursor = 0.0;
  const int p = static_cast<int>(A_poly_.rows());
  const int l = cost_.param_dim();
  for (const auto& piece : pieces_) {
    if (std::abs(piece.lo - cursor) > 1e-12 || piece.hi <= piece.lo)
      fail(ErrorKind::Config, "spec: pieces must partition [0,1]");
    if (piece.b0.size() != p || piece.b1.size() != p)
      fail(ErrorKind::Dimension, "spec: rhs rows do not match A_poly");
    if (piece.s0.size() != l || piece.s1.size() != l)
      fail(ErrorKind::Dimension, "spec: parameter rows must have length T+1");
    // u must stay concave: a(s) >= 0 for admissible s (affine in theta, so
    // endpoint checks suffice)
    if (piece.s0[0] < -1e-12 || piece.s1[0] < -1e-12)
      fail(ErrorKind::Config, "spec: curvature a(s) must be >= 0");
    cursor = piece.hi;
  }
  if (std::abs(cursor - 1.0) > 1e-12)
    fail(ErrorKind::Config, "spec: pieces must end at theta = 1");

  // Certify every X_theta nonempty/bounded at piece endpoints and record M.
  M_ = 0.0;
  for (const auto& piece : pieces_) {
    action_set_at(0.5 * (piece.lo + piece.hi));  // throws if infeasible
    action_set_at(piece.lo);
    M_ = std::max(M_, piece_action_bound(A_poly_, action_kind_, piece));
  }

  // Parameter extremes (affine per piece: endpoint scan is exact).
  s_min_ = pieces_[0].s0;
  s_max_ = pieces_[0].s0;
  for (const auto& piece : pieces_) {
    s_min_ = s_min_.cwiseMin(piece.s0).cwiseMin(piece.s1);
    s_max_ = s_max_.cwiseMax(piece.s0).cwiseMax(piece.s1);
  }

  cost_.B_g = cost_.compute_B_g(M_);
  cost_.B_f = cost_.compute_B_f(M_, s_min_, s_max_);
  cost_.L3 = cost_.compute_L3(M_);

  // Aggregate span S = int X_theta. Exact coordinatewise for boxes; inner
  // box through the interior feasible point otherwise.
  if (action_kind_ == PolyKind::Box) {
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(T_),
                    hi = Eigen::VectorXd::Zero(T_);
    for (const auto& piece : pieces_) {
      double w = piece.hi - piece.lo;
      Eigen::VectorXd hi0 = piece.b0.head(T_), hi1 = piece.b1.head(T_);
      Eigen::VectorXd lo0 = -piece.b0.tail(T_), lo1 = -piece.b1.tail(T_);
      lo += 0.5 * w * (lo0 + lo1);
      hi += 0.5 * w * (hi0 + hi1);
    }
    span_ = PolytopeSet::box(lo, hi);
    span_exact_ = true;
  } else {
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(T_),
                    hi = Eigen::VectorXd::Zero(T_);
    const double inv_sqrtT = 1.0 / std::sqrt(static_cast<double>(T_));
    for (const auto& piece : pieces_) {
      double w = piece.hi - piece.lo;
      for (double end : {piece.lo, piece.hi}) {
        PolytopeSet X = action_set_at(end);
        Eigen::VectorXd c = X.feasible_point();
        double r = std::max(X.boundary_distance(c), 0.0) * inv_sqrtT;
        lo += 0.5 * w * (c.array() - r).matrix();
        hi += 0.5 * w * (c.array() + r).matrix();
      }
    }
    span_ = PolytopeSet::box(lo, hi);
    span_exact_ = false;
  }

  // Witness: d(xbar_theta, rbd X_theta) > eta. Face distances are affine in
  // theta per piece and their min is concave, so endpoint checks are exact.
  if (witness_) {
    if (eta_ <= 0.0)
      fail(ErrorKind::Config,
           "spec: interior slack eta must be > 0 when a witness is given");
    for (const auto& piece : pieces_) {
      for (double end : {piece.lo, piece.hi}) {
        Eigen::VectorXd x = witness_->at(end);
        Eigen::VectorXd b = (end == piece.lo) ? piece.b0 : piece.b1;
        double dist = std::numeric_limits<double>::infinity();
        for (int k = 0; k < A_poly_.rows(); ++k) {
          double nrm = A_poly_.row(k).norm();
          if (nrm < 1e-15) continue;
          dist = std::min(dist, (b[k] - A_poly_.row(k).dot(x)) / nrm);
        }
        if (dist < eta_)
          fail(ErrorKind::Config,
               "spec: witness violates the interior slack eta at theta = " +
                   std::to_string(end));
      }
    }
  }

  // A cap S nonempty, certified for Sigma-representable (box) aggregates.
  if (aggregate_ && span_exact_) {
    if (aggregate_->kind() == PolyKind::Box) {
      Eigen::VectorXd lo = span_.lo().cwiseMax(aggregate_->lo());
      Eigen::VectorXd hi = span_.hi().cwiseMin(aggregate_->hi());
      for (int t = 0; t < T_; ++t)
        if (lo[t] > hi[t] + 1e-12)
          fail(ErrorKind::Infeasible,
               "spec: aggregate constraint A does not meet the feasible "
               "aggregates S in coordinate " +
                   std::to_string(t));
    } else {
      // general A: stack S's box rows onto A's rows; certification by
      // vertex enumeration
      Eigen::MatrixXd C(aggregate_->rows() + 2 * T_, T_);
      Eigen::VectorXd c(aggregate_->rows() + 2 * T_);
      C.topRows(aggregate_->rows()) = aggregate_->constraint_matrix();
      c.head(aggregate_->rows()) = aggregate_->rhs();
      C.middleRows(aggregate_->rows(), T_) = Eigen::MatrixXd::Identity(T_, T_);
      c.segment(aggregate_->rows(), T_) = span_.hi();
      C.bottomRows(T_) = -Eigen::MatrixXd::Identity(T_, T_);
      c.tail(T_) = -span_.lo();
      if (detail::enumerate_vertices(C, c).empty())
        fail(ErrorKind::Infeasible,
             "spec: aggregate constraint A does not meet the feasible "
             "aggregates S");
    }
  }
}

Eigen::VectorXd NonatomicGameSpec::b_at(double theta) const {
  for (const auto& piece : pieces_) {
    if (theta < piece.lo - 1e-12) continue;
    if (theta <= piece.hi + 1e-12 || &piece == &pieces_.back()) {
      double t = std::clamp((theta - piece.lo) / (piece.hi - piece.lo), 0.0, 1.0);
      return piece.b0 + t * (piece.b1 - piece.b0);
    }
  }
  return pieces_.back().b1;
}

Eigen::VectorXd NonatomicGameSpec::s_at(double theta) const {
  for (const auto& piece : pieces_) {
    if (theta < piece.lo - 1e-12) continue;
    if (theta <= piece.hi + 1e-12 || &piece == &pieces_.back()) {
      double t = std::clamp((theta - piece.lo) / (piece.hi - piece.lo), 0.0, 1.0);
      return piece.s0 + t * (piece.s1 - piece.s0);
    }
  }
  return pieces_.back().s1;
}

PolytopeSet NonatomicGameSpec::action_set_at(double theta) const {
  Eigen::VectorXd b = b_at(theta);
  if (action_kind_ == PolyKind::Box)
    return PolytopeSet::box(-b.tail(T_), b.head(T_));
  return PolytopeSet::general(A_poly_, b);
}

std::vector<double> NonatomicGameSpec::breakpoints() const {
  std::vector<double> pts;
  for (std::size_t k = 0; k + 1 < pieces_.size(); ++k)
    pts.push_back(pieces_[k].hi);
  return pts;
}

FiniteGame::FiniteGame(int T, std::vector<double> mu,
                       std::vector<PolytopeSet> sets,
                       std::vector<Eigen::VectorXd> s_bar, CostFamily cost,
                       std::optional<PolytopeSet> aggregate,
                       std::vector<ProvenanceCell> cells)
    : T_(T),
      mu_(std::move(mu)),
      sets_(std::move(sets)),
      s_bar_(std::move(s_bar)),
      cost_(std::move(cost)),
      aggregate_(std::move(aggregate)),
      cells_(std::move(cells)) {
  const std::size_t I = mu_.size();
  if (I == 0) fail(ErrorKind::Config, "finite game: needs at least one player");
  if (sets_.size() != I || s_bar_.size() != I)
    fail(ErrorKind::Dimension, "finite game: per-player arrays differ in size");
  double total = 0.0;
  for (double m : mu_) {
    if (m <= 0.0) fail(ErrorKind::Config, "finite game: weights must be > 0");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorKind::Config,
         "finite game: weights must sum to 1 (got " + std::to_string(total) +
             ")");
  for (const auto& s : sets_)
    if (s.dim() != T_)
      fail(ErrorKind::Dimension, "finite game: action set dimension != T");
  for (const auto& s : s_bar_)
    if (s.size() != cost_.param_dim())
      fail(ErrorKind::Dimension, "finite game: parameter vector length != T+1");
  if (!cells_.empty() && cells_.size() != I)
    fail(ErrorKind::Dimension, "finite game: provenance size != player count");
}

double FiniteGame::max_weight() const {
  return *std::max_element(mu_.begin(), mu_.end());
}

void FiniteGame::require_feasible(const Eigen::MatrixXd& x, double tol) const {
  if (x.rows() != players() || x.cols() != T_)
    fail(ErrorKind::Dimension,
         "profile: expected " + std::to_string(players()) + "x" +
             std::to_string(T_) + ", got " + std::to_string(x.rows()) + "x" +
             std::to_string(x.cols()));
  for (int i = 0; i < players(); ++i) {
    int row = sets_[i].violated_row(x.row(i).transpose(), tol);
    if (row >= 0)
      fail(ErrorKind::Infeasible, "profile: player " + std::to_string(i) +
                                      " violates constraint row " +
                                      std::to_string(row));
  }
}

Eigen::VectorXd aggregate_of(const Eigen::MatrixXd& x) {
  return x.colwise().sum().transpose();
}

double eval_cost(const FiniteGame& game, int i, const Eigen::MatrixXd& x) {
  game.require_feasible(x);
  return eval_cost_with_aggregate(game, i, x.row(i).transpose(),
                                  aggregate_of(x));
}

double eval_cost_with_aggregate(const FiniteGame& game, int i,
                                const Eigen::VectorXd& x_i,
                                const Eigen::VectorXd& X) {
  if (x_i.size() != game.dim() || X.size() != game.dim())
    fail(ErrorKind::Dimension, "eval_cost: vector dimension != T");
  const double mu = game.weight(i);
  return mu * game.cost().value(x_i / mu, X, game.params(i));
}

Eigen::VectorXd grad_own(const FiniteGame& game, int i,
                         const Eigen::MatrixXd& x, GradMode mode) {
  if (x.rows() != game.players() || x.cols() != game.dim())
    fail(ErrorKind::Dimension, "grad_own: profile shape mismatch");
  const double mu = game.weight(i);
  const Eigen::VectorXd x_i = x.row(i).transpose();
  const Eigen::VectorXd X = aggregate_of(x);
  // grad_1 f_i(x_i, X) = grad_1 f(x_i/mu, X; s) by the chain rule on the
  // mu-scaling
  Eigen::VectorXd g = game.cost().grad_own(x_i / mu, X, game.params(i));
  if (mode == GradMode::Vne) g += game.cost().grad_agg(x_i);
  return g;
}

Eigen::MatrixXd operator_value(const FiniteGame& game, const Eigen::MatrixXd& x,
                               GradMode mode) {
  Eigen::MatrixXd G(game.players(), game.dim());
  const Eigen::VectorXd X = aggregate_of(x);
  for (int i = 0; i < game.players(); ++i) {
    const double mu = game.weight(i);
    Eigen::VectorXd x_i = x.row(i).transpose();
    Eigen::VectorXd g = game.cost().grad_own(x_i / mu, X, game.params(i));
    if (mode == GradMode::Vne) g += game.cost().grad_agg(x_i);
    G.row(i) = g.transpose();
  }
  return G;
}

}  // namespace aggsolve
