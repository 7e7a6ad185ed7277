#include "aggsolve/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace aggsolve {

namespace detail {

namespace {

// Next k-combination of row indices in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b,
                                                double tol) {
  const int T = static_cast<int>(A.cols());
  const int p = static_cast<int>(A.rows());
  if (T > 4)
    fail(ErrorKind::Geometry,
         "vertex enumeration supports dimension <= 4 (got " +
             std::to_string(T) + "); use the box fast path or a sampled bound");
  std::vector<Eigen::VectorXd> verts;
  if (p < T) return verts;

  std::vector<int> idx(T);
  for (int i = 0; i < T; ++i) idx[i] = i;
  Eigen::MatrixXd B(T, T);
  Eigen::VectorXd rb(T);
  do {
    for (int i = 0; i < T; ++i) {
      B.row(i) = A.row(idx[i]);
      rb[i] = b[idx[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd v = lu.solve(rb);
    if (((A * v).array() <= b.array() + tol).all()) {
      bool dup = false;
      for (const auto& w : verts)
        if ((w - v).lpNorm<Eigen::Infinity>() < 1e-8) {
          dup = true;
          break;
        }
      if (!dup) verts.push_back(v);
    }
  } while (next_combination(idx, p));
  return verts;
}

namespace {

// True when the recession cone {d : A d <= 0} is {0}. Exact for dim <= 4:
// the cone clipped to the unit box is a polytope whose vertices are all at
// the origin iff the cone is trivial.
bool recession_cone_trivial(const Eigen::MatrixXd& A) {
  const int T = static_cast<int>(A.cols());
  const int p = static_cast<int>(A.rows());
  Eigen::MatrixXd C(p + 2 * T, T);
  Eigen::VectorXd c(p + 2 * T);
  C.topRows(p) = A;
  c.head(p).setZero();
  C.middleRows(p, T) = Eigen::MatrixXd::Identity(T, T);
  c.segment(p, T).setConstant(1.0);
  C.bottomRows(T) = -Eigen::MatrixXd::Identity(T, T);
  c.tail(T).setConstant(1.0);
  for (const auto& v : enumerate_vertices(C, c))
    if (v.lpNorm<Eigen::Infinity>() > 1e-7) return false;
  return true;
}

}  // namespace

}  // namespace detail

PolytopeSet PolytopeSet::box(const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size())
    fail(ErrorKind::Dimension, "box: lo and hi sizes differ");
  const int T = static_cast<int>(lo.size());
  for (int t = 0; t < T; ++t)
    if (lo[t] > hi[t])
      fail(ErrorKind::Infeasible, "box: empty interval in coordinate " +
                                      std::to_string(t) + " (lo > hi)");
  PolytopeSet P;
  P.kind_ = PolyKind::Box;
  P.lo_ = lo;
  P.hi_ = hi;
  P.A_.resize(2 * T, T);
  P.A_.topRows(T) = Eigen::MatrixXd::Identity(T, T);
  P.A_.bottomRows(T) = -Eigen::MatrixXd::Identity(T, T);
  P.b_.resize(2 * T);
  P.b_.head(T) = hi;
  P.b_.tail(T) = -lo;
  P.feasible_point_ = 0.5 * (lo + hi);
  double r2 = 0.0;
  for (int t = 0; t < T; ++t)
    r2 += std::max(lo[t] * lo[t], hi[t] * hi[t]);
  P.radius_ = std::sqrt(r2);
  return P;
}

PolytopeSet PolytopeSet::simplex_budget(int dim, double budget) {
  if (dim <= 0) fail(ErrorKind::Dimension, "simplex_budget: dim must be >= 1");
  if (budget < 0)
    fail(ErrorKind::Infeasible, "simplex_budget: negative budget");
  PolytopeSet P;
  P.kind_ = PolyKind::SimplexBudget;
  P.budget_ = budget;
  P.A_.resize(dim + 2, dim);
  P.A_.topRows(dim) = -Eigen::MatrixXd::Identity(dim, dim);
  P.A_.row(dim).setConstant(1.0);
  P.A_.row(dim + 1).setConstant(-1.0);
  P.b_.resize(dim + 2);
  P.b_.head(dim).setZero();
  P.b_[dim] = budget;
  P.b_[dim + 1] = -budget;
  P.feasible_point_ = Eigen::VectorXd::Constant(dim, budget / dim);
  P.radius_ = budget;
  return P;
}

PolytopeSet PolytopeSet::general(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b) {
  if (A.rows() != b.size())
    fail(ErrorKind::Dimension, "general: A rows and b length differ");
  PolytopeSet P;
  P.kind_ = PolyKind::General;
  P.A_ = A;
  P.b_ = b;
  P.certify();
  return P;
}

void PolytopeSet::certify() {
  if (!detail::recession_cone_trivial(A_))
    fail(ErrorKind::Infeasible,
         "polytope is unbounded (nontrivial recession cone)");
  auto verts = detail::enumerate_vertices(A_, b_);
  if (verts.empty())
    fail(ErrorKind::Infeasible, "polytope is empty (no feasible vertex)");
  radius_ = 0.0;
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim());
  for (const auto& v : verts) {
    radius_ = std::max(radius_, v.norm());
    centroid += v;
  }
  centroid /= static_cast<double>(verts.size());
  feasible_point_ = centroid;
}

bool PolytopeSet::contains(const Eigen::VectorXd& x, double tol) const {
  return violated_row(x, tol) < 0;
}

int PolytopeSet::violated_row(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim())
    fail(ErrorKind::Dimension, "contains: point dimension " +
                                   std::to_string(x.size()) +
                                   " != set dimension " + std::to_string(dim()));
  Eigen::VectorXd slack = b_ - A_ * x;
  for (int k = 0; k < slack.size(); ++k)
    if (slack[k] < -tol) return k;
  return -1;
}

PolytopeSet PolytopeSet::scaled(double m) const {
  if (m <= 0) fail(ErrorKind::Dimension, "scaled: factor must be positive");
  PolytopeSet P(*this);
  P.b_ *= m;
  if (kind_ == PolyKind::Box) {
    P.lo_ *= m;
    P.hi_ *= m;
  }
  if (kind_ == PolyKind::SimplexBudget) P.budget_ *= m;
  P.radius_ *= m;
  P.feasible_point_ *= m;
  return P;
}

std::vector<Eigen::VectorXd> PolytopeSet::vertices() const {
  if (kind_ == PolyKind::Box) {
    const int T = dim();
    std::vector<Eigen::VectorXd> verts;
    verts.reserve(std::size_t{1} << T);
    for (unsigned mask = 0; mask < (1u << T); ++mask) {
      Eigen::VectorXd v(T);
      for (int t = 0; t < T; ++t) v[t] = (mask >> t) & 1 ? hi_[t] : lo_[t];
      bool dup = false;
      for (const auto& w : verts)
        if ((w - v).lpNorm<Eigen::Infinity>() < 1e-15) {
          dup = true;
          break;
        }
      if (!dup) verts.push_back(v);
    }
    return verts;
  }
  return detail::enumerate_vertices(A_, b_);
}

double PolytopeSet::boundary_distance(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    fail(ErrorKind::Dimension, "boundary_distance: dimension mismatch");
  double dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < A_.rows(); ++k) {
    double nrm = A_.row(k).norm();
    if (nrm < 1e-15) continue;
    dist = std::min(dist, (b_[k] - A_.row(k).dot(x)) / nrm);
  }
  return dist;
}

}  // namespace aggsolve
