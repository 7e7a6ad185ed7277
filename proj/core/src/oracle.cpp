#include "aggsolve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace aggsolve {

namespace {

constexpr double kConstDen = 1e-14;  // |v1| below this: constant denominator

struct Affine {
  double c0, c1;  // value(theta) = c0 + c1 * theta
  double at(double th) const { return c0 + c1 * th; }
};

Affine affine_from_piece(double lo, double hi, double v_lo, double v_hi) {
  double slope = (v_hi - v_lo) / (hi - lo);
  return {v_lo - slope * lo, slope};
}

// real roots of q2 t^2 + q1 t + q0 inside (lo, hi)
void quad_roots(double q2, double q1, double q0, double lo, double hi,
                std::vector<double>& out) {
  auto push = [&](double r) {
    if (r > lo + 1e-13 && r < hi - 1e-13) out.push_back(r);
  };
  if (std::abs(q2) < 1e-14) {
    if (std::abs(q1) > 1e-14) push(-q0 / q1);
    return;
  }
  double disc = q1 * q1 - 4 * q2 * q0;
  if (disc < 0) return;
  double s = std::sqrt(disc);
  // numerically stable pair
  double r1 = (-q1 - (q1 >= 0 ? s : -s)) / (2 * q2);
  double r2 = (q0 / q2) / (r1 == 0.0 ? 1e-300 : r1);
  push(r1);
  push(r2);
}

double integral_affine(double w0, double w1, double c, double d) {
  return w0 * (d - c) + 0.5 * w1 * (d * d - c * c);
}

double integral_affine_sq(double w0, double w1, double c, double d) {
  // int (w0 + w1 t)^2 = w0^2 dt + w0 w1 t^2 + w1^2 t^3 / 3
  return w0 * w0 * (d - c) + w0 * w1 * (d * d - c * c) +
         w1 * w1 * (d * d * d - c * c * c) / 3.0;
}

}  // namespace

Eigen::VectorXd WardropSolution::value_at(double theta) const {
  for (const auto& seg : segments) {
    if (theta < seg.lo - 1e-12) continue;
    if (theta <= seg.hi + 1e-12 || &seg == &segments.back()) {
      Eigen::VectorXd v(static_cast<int>(seg.coords.size()));
      for (std::size_t t = 0; t < seg.coords.size(); ++t) {
        const Coord& c = seg.coords[t];
        v[static_cast<int>(t)] =
            c.rational ? (c.u0 + c.u1 * theta) / (c.v0 + c.v1 * theta)
                       : c.w0 + c.w1 * theta;
      }
      return v;
    }
  }
  fail(ErrorKind::Oracle, "oracle profile: theta outside [0,1]");
}

namespace {

double coord_integral(const WardropSolution::Coord& c, double a, double b) {
  if (!c.rational) return integral_affine(c.w0, c.w1, a, b);
  if (std::abs(c.v1) < kConstDen)
    return integral_affine(c.u0 / c.v0, c.u1 / c.v0, a, b);
  // u/v = A + B/v
  double A = c.u1 / c.v1;
  double B = c.u0 - A * c.v0;
  double va = c.v0 + c.v1 * a, vb = c.v0 + c.v1 * b;
  return A * (b - a) + (B / c.v1) * std::log(vb / va);
}

double coord_integral_sq(const WardropSolution::Coord& c, double a, double b) {
  if (!c.rational) return integral_affine_sq(c.w0, c.w1, a, b);
  if (std::abs(c.v1) < kConstDen)
    return integral_affine_sq(c.u0 / c.v0, c.u1 / c.v0, a, b);
  double A = c.u1 / c.v1;
  double B = c.u0 - A * c.v0;
  double va = c.v0 + c.v1 * a, vb = c.v0 + c.v1 * b;
  return A * A * (b - a) + (2.0 * A * B / c.v1) * std::log(vb / va) +
         B * B / c.v1 * (1.0 / va - 1.0 / vb);
}

}  // namespace

Eigen::VectorXd WardropSolution::integral(double c, double d) const {
  const int T = static_cast<int>(segments.front().coords.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(T);
  for (const auto& seg : segments) {
    double a = std::max(c, seg.lo), b = std::min(d, seg.hi);
    if (b <= a) continue;
    for (int t = 0; t < T; ++t) acc[t] += coord_integral(seg.coords[t], a, b);
  }
  return acc;
}

double WardropSolution::norm_sq(double c, double d) const {
  double acc = 0.0;
  for (const auto& seg : segments) {
    double a = std::max(c, seg.lo), b = std::min(d, seg.hi);
    if (b <= a) continue;
    for (const auto& co : seg.coords) acc += coord_integral_sq(co, a, b);
  }
  return acc;
}

double WardropSolution::step_error_sq(const StepProfile& s) const {
  double acc = 0.0;
  for (int k = 0; k < s.segments(); ++k) {
    double lo = s.breakpoints()[k], hi = s.breakpoints()[k + 1];
    for (const auto& seg : segments) {
      double a = std::max(lo, seg.lo), b = std::min(hi, seg.hi);
      if (b <= a) continue;
      for (std::size_t t = 0; t < seg.coords.size(); ++t) {
        double c = s.values()(k, static_cast<int>(t));
        acc += coord_integral_sq(seg.coords[t], a, b) -
               2.0 * c * coord_integral(seg.coords[t], a, b) +
               c * c * (b - a);
      }
    }
  }
  return acc;
}

namespace {

// x*_theta = clip((b_u(s) - d - D X - p)/a, lo, hi), segmented per
// characteristic piece at the clip crossings (roots of affine-vs-quadratic).
std::vector<WardropSolution::Segment> build_profile(
    const NonatomicGameSpec& spec, const Eigen::VectorXd& X,
    const Eigen::VectorXd& p) {
  const int T = spec.dim();
  const Eigen::VectorXd shift = spec.cost().D * X + spec.cost().d + p;
  std::vector<WardropSolution::Segment> segments;

  for (const auto& piece : spec.pieces()) {
    Affine a_map = affine_from_piece(piece.lo, piece.hi, piece.s0[0], piece.s1[0]);
    std::vector<double> cuts = {piece.lo, piece.hi};
    std::vector<Affine> u(T), lo(T), hi(T);
    for (int t = 0; t < T; ++t) {
      u[t] = affine_from_piece(piece.lo, piece.hi, piece.s0[t + 1] - shift[t],
                               piece.s1[t + 1] - shift[t]);
      hi[t] = affine_from_piece(piece.lo, piece.hi, piece.b0[t], piece.b1[t]);
      lo[t] = affine_from_piece(piece.lo, piece.hi, -piece.b0[T + t],
                                -piece.b1[T + t]);
      // u - a*hi = 0 and u - a*lo = 0 split interior from clipped
      for (const Affine& bb : {hi[t], lo[t]})
        quad_roots(-a_map.c1 * bb.c1, u[t].c1 - a_map.c0 * bb.c1 - a_map.c1 * bb.c0,
                   u[t].c0 - a_map.c0 * bb.c0, piece.lo, piece.hi, cuts);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-13; }),
               cuts.end());

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      WardropSolution::Segment seg;
      seg.lo = cuts[k];
      seg.hi = cuts[k + 1];
      double mid = 0.5 * (seg.lo + seg.hi);
      double a_mid = a_map.at(mid);
      seg.coords.resize(T);
      for (int t = 0; t < T; ++t) {
        double r = u[t].at(mid) / a_mid;
        WardropSolution::Coord& c = seg.coords[t];
        if (r > hi[t].at(mid)) {
          c.rational = false;
          c.w0 = hi[t].c0;
          c.w1 = hi[t].c1;
        } else if (r < lo[t].at(mid)) {
          c.rational = false;
          c.w0 = lo[t].c0;
          c.w1 = lo[t].c1;
        } else {
          c.rational = true;
          c.u0 = u[t].c0;
          c.u1 = u[t].c1;
          c.v0 = a_map.c0;
          c.v1 = a_map.c1;
        }
      }
      segments.push_back(std::move(seg));
    }
  }
  return segments;
}

Eigen::VectorXd profile_integral(const std::vector<WardropSolution::Segment>& segs,
                                 int T) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(T);
  for (const auto& seg : segs)
    for (int t = 0; t < T; ++t)
      acc[t] += coord_integral(seg.coords[t], seg.lo, seg.hi);
  return acc;
}

// int 1/a(s_theta) dtheta, exact per piece
double inv_a_integral(const NonatomicGameSpec& spec) {
  double acc = 0.0;
  for (const auto& piece : spec.pieces()) {
    Affine a = affine_from_piece(piece.lo, piece.hi, piece.s0[0], piece.s1[0]);
    if (std::abs(a.c1) < kConstDen)
      acc += (piece.hi - piece.lo) / a.c0;
    else
      acc += std::log(a.at(piece.hi) / a.at(piece.lo)) / a.c1;
  }
  return acc;
}

struct FixedPoint {
  Eigen::VectorXd X;
  std::vector<WardropSolution::Segment> segments;
};

FixedPoint aggregate_fixed_point(const NonatomicGameSpec& spec,
                                 const Eigen::VectorXd& p,
                                 const OracleOptions& opts, double gamma) {
  const int T = spec.dim();
  Eigen::VectorXd X = spec.aggregate_span().feasible_point();
  double prev_gap = std::numeric_limits<double>::infinity();
  int grew = 0;
  for (int it = 0; it < opts.max_fp_iters; ++it) {
    auto segs = build_profile(spec, X, p);
    Eigen::VectorXd Phi = profile_integral(segs, T);
    double gap = (Phi - X).norm();
    if (gap < opts.fp_tol * (1.0 + X.norm())) return {Phi, std::move(segs)};
    grew = gap > prev_gap * (1.0 + 1e-9) ? grew + 1 : 0;
    if (grew > 50)
      fail(ErrorKind::Oracle,
           "we_oracle: aggregate iteration diverges (non-contraction; is the "
           "price map monotone?)");
    prev_gap = gap;
    X += gamma * (Phi - X);
  }
  fail(ErrorKind::Oracle, "we_oracle: aggregate fixed point did not converge");
}

void certify(const NonatomicGameSpec& spec, WardropSolution& sol,
             const OracleOptions& opts) {
  const int T = spec.dim();
  const Eigen::VectorXd price = spec.cost().price(sol.aggregate);
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < opts.cert_samples; ++k) {
    double th = (k + 0.5) / opts.cert_samples;
    Eigen::VectorXd x = sol.value_at(th);
    Eigen::VectorXd s = spec.s_at(th);
    Eigen::VectorXd b = spec.b_at(th);
    Eigen::VectorXd g = price - CostFamily::b_u_of(s) +
                        CostFamily::a_of(s) * x + sol.price_shift;
    for (int t = 0; t < T; ++t) {
      double lo = -b[T + t], hi = b[t];
      double m;
      if (x[t] <= lo + 1e-10)
        m = g[t];  // at the lower face: need g >= 0
      else if (x[t] >= hi - 1e-10)
        m = -g[t];  // at the upper face: need g <= 0
      else
        m = -std::abs(g[t]);  // interior: need g = 0
      margin = std::min(margin, m);
    }
  }
  if (margin < -opts.cert_tol)
    fail(ErrorKind::Oracle,
         "we_oracle: pointwise equilibrium certificate failed (margin " +
             std::to_string(margin) + ")");
  // self-consistency: the stored aggregate is the profile integral
  if ((sol.integral() - sol.aggregate).norm() > 1e-9)
    fail(ErrorKind::Oracle, "we_oracle: aggregate / profile mismatch");
  if (spec.aggregate()) {
    const PolytopeSet& A = *spec.aggregate();
    if (!A.contains(sol.aggregate, 1e-8))
      fail(ErrorKind::Oracle, "we_oracle: aggregate violates the constraint");
    Eigen::VectorXd slack = A.rhs() - A.constraint_matrix() * sol.aggregate;
    for (int k = 0; k < A.rows(); ++k) {
      if (sol.multipliers[k] < -1e-12)
        fail(ErrorKind::Oracle, "we_oracle: negative face multiplier");
      if (sol.multipliers[k] > 1e-10 && std::abs(slack[k]) > 1e-7)
        fail(ErrorKind::Oracle,
             "we_oracle: complementarity failed on constraint row " +
                 std::to_string(k));
    }
  }
  sol.certificate_margin = margin;
}

}  // namespace

WardropSolution we_oracle(const NonatomicGameSpec& spec,
                          const OracleOptions& opts) {
  if (spec.action_kind() != PolyKind::Box)
    fail(ErrorKind::Oracle,
         "we_oracle: supported for box action sets only (general polytopes "
         "are validated through kkt_brute at small sizes)");
  if (spec.s_min()[0] <= 0.0)
    fail(ErrorKind::Oracle,
         "we_oracle: needs inf a(s) > 0 for the clipping best response");

  const int T = spec.dim();
  const double D_norm = spec.cost().D.jacobiSvd().singularValues()(0);
  const double gamma =
      opts.damping_scale / (1.0 + D_norm * inv_a_integral(spec));
  if (gamma <= 0.0 || gamma > 1.0)
    fail(ErrorKind::Oracle, "we_oracle: damping out of range");

  const int n_rows = spec.aggregate() ? spec.aggregate()->rows() : 0;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n_rows);
  auto price_of = [&](const Eigen::VectorXd& lam) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(T);
    for (int k = 0; k < n_rows; ++k)
      p += lam[k] * spec.aggregate()->constraint_matrix().row(k).transpose();
    return p;
  };

  FixedPoint fp = aggregate_fixed_point(spec, price_of(lambda), opts, gamma);

  if (n_rows > 0) {
    const Eigen::MatrixXd& A = spec.aggregate()->constraint_matrix();
    const Eigen::VectorXd& b = spec.aggregate()->rhs();
    for (int cycle = 0; cycle < 50 * n_rows; ++cycle) {
      // worst complementarity violation: either a violated row, or an
      // over-priced slack row
      int worst = -1;
      double worst_viol = 1e-10;
      for (int k = 0; k < n_rows; ++k) {
        double slack = b[k] - A.row(k).dot(fp.X);
        double viol = std::max(-slack, lambda[k] > 0 ? slack : 0.0);
        if (viol > worst_viol) {
          worst_viol = viol;
          worst = k;
        }
      }
      if (worst < 0) break;

      // bisect lambda[worst]; <a_k, X(lambda)> is nonincreasing in lambda_k
      double lo = 0.0, hi_l = std::max(1.0, 2.0 * lambda[worst]);
      auto row_slack = [&](double l) {
        lambda[worst] = l;
        fp = aggregate_fixed_point(spec, price_of(lambda), opts, gamma);
        return b[worst] - A.row(worst).dot(fp.X);
      };
      if (row_slack(0.0) >= 0.0) {
        lambda[worst] = 0.0;
        continue;
      }
      while (row_slack(hi_l) < 0.0) {
        hi_l *= 2.0;
        if (hi_l > 1e12)
          fail(ErrorKind::Oracle,
               "we_oracle: face multiplier diverges; A cap S may be empty "
               "along this face");
      }
      while (hi_l - lo > opts.mult_tol) {
        double mid = 0.5 * (lo + hi_l);
        if (row_slack(mid) < 0.0)
          lo = mid;
        else
          hi_l = mid;
      }
      row_slack(hi_l);  // end on the feasible side
    }
  }

  WardropSolution sol;
  sol.aggregate = fp.X;
  sol.price_shift = price_of(lambda);
  sol.multipliers = lambda;
  sol.segments = std::move(fp.segments);
  certify(spec, sol, opts);
  return sol;
}

Eigen::MatrixXd kkt_brute(const FiniteGame& game, GradMode mode) {
  const int I = game.players();
  const int T = game.dim();
  if (I > 3 || T > 2)
    fail(ErrorKind::Config, "kkt_brute: supported for I <= 3, T <= 2");
  for (int i = 0; i < I; ++i)
    if (game.action_set(i).kind() != PolyKind::Box)
      fail(ErrorKind::Config, "kkt_brute: box action sets only");
  const bool has_A = game.aggregate().has_value();
  if (has_A && game.aggregate()->kind() != PolyKind::Box)
    fail(ErrorKind::Config, "kkt_brute: aggregate constraint must be a box");

  const int n_x = I * T;
  const int n = n_x + T;  // unknowns: x stacked row-major, then q
  const Eigen::MatrixXd& D = game.cost().D;

  // G_i(x) = D X + d - b_u_i + (a_i/mu_i) x_i [+ D^T x_i in vne mode]
  auto stationarity_row = [&](int i, int t, Eigen::RowVectorXd& row,
                              double& rhs) {
    row.setZero(n);
    for (int j = 0; j < I; ++j)
      for (int u = 0; u < T; ++u) row[j * T + u] += D(t, u);
    double ai = CostFamily::a_of(game.params(i));
    row[i * T + t] += ai / game.weight(i);
    if (mode == GradMode::Vne)
      for (int u = 0; u < T; ++u) row[i * T + u] += D(u, t);
    row[n_x + t] += 1.0;  // + q_t
    rhs = CostFamily::b_u_of(game.params(i))[t] - game.cost().d[t];
  };

  const long patterns_x = static_cast<long>(std::pow(3, n_x));
  const long patterns_q = has_A ? static_cast<long>(std::pow(3, T)) : 1;

  Eigen::MatrixXd best;
  double best_margin = -1e18;
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd rhs(n);

  for (long px = 0; px < patterns_x; ++px) {
    for (long pq = 0; pq < patterns_q; ++pq) {
      M.setZero();
      rhs.setZero();
      long cx = px;
      std::vector<int> xstate(n_x);
      for (int k = 0; k < n_x; ++k) {
        xstate[k] = cx % 3;  // 0 free, 1 lo, 2 hi
        cx /= 3;
      }
      long cq = pq;
      std::vector<int> qstate(T, 0);
      for (int t = 0; t < T && has_A; ++t) {
        qstate[t] = cq % 3;
        cq /= 3;
      }

      int r = 0;
      for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t, ++r) {
          int k = i * T + t;
          if (xstate[k] == 0) {
            Eigen::RowVectorXd row;
            double rr;
            stationarity_row(i, t, row, rr);
            M.row(r) = row;
            rhs[r] = rr;
          } else {
            M(r, k) = 1.0;
            rhs[r] = xstate[k] == 1 ? game.action_set(i).lo()[t]
                                    : game.action_set(i).hi()[t];
          }
        }
      for (int t = 0; t < T; ++t, ++r) {
        if (!has_A || qstate[t] == 0) {
          M(r, n_x + t) = 1.0;
          rhs[r] = 0.0;
        } else {
          for (int j = 0; j < I; ++j) M(r, j * T + t) = 1.0;
          rhs[r] = qstate[t] == 1 ? game.aggregate()->lo()[t]
                                  : game.aggregate()->hi()[t];
        }
      }

      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (!lu.isInvertible()) continue;
      Eigen::VectorXd sol = lu.solve(rhs);

      // feasibility, multiplier signs, complementarity
      Eigen::MatrixXd x(I, T);
      for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t) x(i, t) = sol[i * T + t];
      Eigen::VectorXd q = sol.tail(T);
      Eigen::VectorXd X = aggregate_of(x);
      double margin = 1e18;
      for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t) {
          int k = i * T + t;
          double lo = game.action_set(i).lo()[t],
                 hi = game.action_set(i).hi()[t];
          if (xstate[k] == 0)
            margin = std::min({margin, x(i, t) - lo, hi - x(i, t)});
          else {
            // active face: the shifted gradient is the box multiplier
            Eigen::RowVectorXd row;
            double rr;
            stationarity_row(i, t, row, rr);
            double g = row.dot(sol) - rr;  // G_i(x)_t + q_t
            margin = std::min(margin, xstate[k] == 1 ? g : -g);
          }
        }
      for (int t = 0; t < T && has_A; ++t) {
        double lo = game.aggregate()->lo()[t], hi = game.aggregate()->hi()[t];
        if (qstate[t] == 0)
          margin = std::min({margin, X[t] - lo, hi - X[t]});
        else
          margin = std::min(margin, qstate[t] == 1 ? -q[t] : q[t]);
      }
      if (!has_A) {
        // q must vanish
        margin = std::min(margin, -q.cwiseAbs().maxCoeff());
      }

      if (margin > -1e-9 && margin > best_margin) {
        best_margin = margin;
        best = x;
      }
    }
  }
  if (best.size() == 0)
    fail(ErrorKind::Oracle,
         "kkt_brute: no active-set pattern is feasible and complementary "
         "(modeling bug?)");
  return best;
}

namespace {

NonatomicGameSpec::Inputs box_spec_base(int T) {
  NonatomicGameSpec::Inputs in;
  in.T = T;
  in.action_kind = PolyKind::Box;
  in.A_poly.resize(2 * T, T);
  in.A_poly.topRows(T) = Eigen::MatrixXd::Identity(T, T);
  in.A_poly.bottomRows(T) = -Eigen::MatrixXd::Identity(T, T);
  return in;
}

Eigen::VectorXd box_rhs(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd b(2 * lo.size());
  b << hi, -lo;
  return b;
}

Eigen::VectorXd params(double a, const Eigen::VectorXd& bu) {
  Eigen::VectorXd s(bu.size() + 1);
  s << a, bu;
  return s;
}

Eigen::VectorXd vec1(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

std::vector<std::pair<std::string, NonatomicGameSpec>> benchmark_suite() {
  std::vector<std::pair<std::string, NonatomicGameSpec>> suite;

  {  // lq1: homogeneous linear-quadratic baseline
    auto in = box_spec_base(1);
    in.cost.D = Eigen::MatrixXd::Constant(1, 1, 1.0);
    in.cost.d = vec1(0.0);
    Eigen::VectorXd b = box_rhs(vec1(0.0), vec1(10.0));
    in.pieces = {{0.0, 1.0, b, b, params(1.0, vec1(2.0)), params(1.0, vec1(2.0))}};
    in.witness = PiecewiseAffineProfile::constant(vec1(5.0));
    in.eta = 4.9;
    suite.emplace_back("lq1", NonatomicGameSpec(std::move(in)));
  }

  {  // lq-hetero: curvature and action caps drift with theta
    auto in = box_spec_base(1);
    in.cost.D = Eigen::MatrixXd::Constant(1, 1, 1.0);
    in.cost.d = vec1(0.0);
    in.pieces = {{0.0, 1.0, box_rhs(vec1(0.0), vec1(1.0)),
                  box_rhs(vec1(0.0), vec1(2.0)), params(1.0, vec1(2.0)),
                  params(1.5, vec1(2.0))}};
    in.witness = PiecewiseAffineProfile(
        {{0.0, 1.0, vec1(0.5), vec1(1.0)}});
    in.eta = 0.45;
    suite.emplace_back("lq-hetero", NonatomicGameSpec(std::move(in)));
  }

  {  // lq-2d: two goods, diagonal prices, ramp-constrained aggregate
    auto in = box_spec_base(2);
    in.cost.D = Eigen::Vector2d(1.0, 1.5).asDiagonal();
    in.cost.d = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd hi0(2), hi1(2);
    hi0 << 2.0, 2.0;
    hi1 << 2.1, 2.0;
    Eigen::VectorXd bu0(2), bu1(2);
    bu0 << 3.0, 2.75;
    bu1 << 3.25, 2.5;
    in.pieces = {{0.0, 1.0, box_rhs(lo, hi0), box_rhs(lo, hi1),
                  params(1.0, bu0), params(1.0, bu1)}};
    // A = {X in [0,3]^2 : |X_2 - X_1| <= 0.2}
    Eigen::MatrixXd A(6, 2);
    Eigen::VectorXd b(6);
    A << 1, -1, -1, 1, 1, 0, 0, 1, -1, 0, 0, -1;
    b << 0.2, 0.2, 3.0, 3.0, 0.0, 0.0;
    in.aggregate = PolytopeSet::general(A, b);
    in.witness = PiecewiseAffineProfile::constant(Eigen::Vector2d(1.0, 1.0));
    in.eta = 0.95;
    suite.emplace_back("lq-2d", NonatomicGameSpec(std::move(in)));
  }

  {  // lq-breakpoint: one characteristic discontinuity at sigma = 0.3
    auto in = box_spec_base(1);
    in.cost.D = Eigen::MatrixXd::Constant(1, 1, 1.0);
    in.cost.d = vec1(0.0);
    Eigen::VectorXd b = box_rhs(vec1(0.0), vec1(10.0));
    in.pieces = {{0.0, 0.3, b, b, params(1.0, vec1(2.0)), params(1.0, vec1(2.0))},
                 {0.3, 1.0, b, b, params(2.0, vec1(4.0)), params(2.0, vec1(4.0))}};
    in.witness = PiecewiseAffineProfile::constant(vec1(1.0));
    in.eta = 0.9;
    suite.emplace_back("lq-breakpoint", NonatomicGameSpec(std::move(in)));
  }

  return suite;
}

NonatomicGameSpec adversarial_spec() {
  // decreasing price (D = -1) with weak curvature a = 0.25: the aggregate
  // term dominates and coherent displacements get a strictly negative gap
  auto in = box_spec_base(1);
  in.cost.D = Eigen::MatrixXd::Constant(1, 1, -1.0);
  in.cost.d = vec1(0.0);
  Eigen::VectorXd b = box_rhs(vec1(0.0), vec1(10.0));
  in.pieces = {
      {0.0, 1.0, b, b, params(0.25, vec1(2.0)), params(0.25, vec1(2.0))}};
  in.witness = PiecewiseAffineProfile::constant(vec1(5.0));
  in.eta = 4.9;
  return NonatomicGameSpec(std::move(in));
}

}  // namespace aggsolve
