#include "aggsolve/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aggsolve/geometry.hpp"

namespace aggsolve {

namespace {

// Sensitivity of the polytope {A x <= b} to rhs perturbations:
// d_H(P(b), P(b')) <= C0 ||b - b'||. Exactly 1 for boxes; otherwise a
// vertex-basis estimate max ||A_B^{-1}||.
double rhs_sensitivity(const Eigen::MatrixXd& A, PolyKind kind) {
  if (kind == PolyKind::Box) return 1.0;
  const int T = static_cast<int>(A.cols());
  const int p = static_cast<int>(A.rows());
  double c0 = 1.0;
  std::vector<int> idx(T);
  for (int i = 0; i < T; ++i) idx[i] = i;
  auto next = [&]() {
    for (int i = T - 1; i >= 0; --i)
      if (idx[i] < p - T + i) {
        ++idx[i];
        for (int j = i + 1; j < T; ++j) idx[j] = idx[j - 1] + 1;
        return true;
      }
    return false;
  };
  do {
    Eigen::MatrixXd B(T, T);
    for (int i = 0; i < T; ++i) B.row(i) = A.row(idx[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    double smin = svd.singularValues()(T - 1);
    if (smin > 1e-9) c0 = std::max(c0, 1.0 / smin);
  } while (next());
  return c0;
}

}  // namespace

AASMetrics compute_metrics(const NonatomicGameSpec& spec,
                           const FiniteGame& game) {
  if (!game.has_provenance())
    fail(ErrorKind::Config,
         "compute_metrics: game carries no builder provenance");
  AASMetrics m;
  m.slack_C0 = rhs_sensitivity(spec.action_matrix(), spec.action_kind());
  const double L3 = spec.cost().L3;
  const double B_g = spec.cost().B_g;

  for (int i = 0; i < game.players(); ++i) {
    const auto& cell = game.cells()[i];
    const double mu = game.weight(i);
    PolytopeSet scaled = game.action_set(i).scaled(1.0 / mu);

    double delta_i = 0.0, d_i = 0.0;
    for (const auto& [lo, hi] : cell.intervals) {
      double endpoint_dh = 0.0, osc = 0.0, s_gap = 0.0;
      for (double th : {lo, hi}) {
        endpoint_dh =
            std::max(endpoint_dh, hausdorff(spec.action_set_at(th), scaled));
        s_gap = std::max(s_gap, (spec.s_at(th) - game.params(i)).norm());
        m.endpoint_samples += 1;
      }
      osc = (spec.b_at(hi) - spec.b_at(lo)).norm();
      delta_i = std::max(delta_i, endpoint_dh + m.slack_C0 * osc);
      d_i = std::max(d_i, L3 * s_gap);
    }
    m.cell_delta.push_back(delta_i);
    m.cell_d.push_back(d_i);
    m.delta = std::max(m.delta, delta_i);
    m.d_sub = std::max(m.d_sub, d_i);
    m.lambda = std::max(m.lambda, mu * B_g);
  }

  if (spec.aggregate() && game.aggregate())
    m.D_cap = hausdorff(*game.aggregate(), *spec.aggregate());
  else if (spec.aggregate() || game.aggregate())
    fail(ErrorKind::Config,
         "compute_metrics: spec and game disagree on the aggregate "
         "constraint");
  return m;
}

namespace {

// Distance from an interior aggregate to the relative boundary of S cap A
// (stacked rows; S is the box span, exact for box families).
double dist_to_rbd(const NonatomicGameSpec& spec, const Eigen::VectorXd& X) {
  const PolytopeSet& S = spec.aggregate_span();
  double dist = S.boundary_distance(X);
  if (spec.aggregate()) {
    const PolytopeSet& A = *spec.aggregate();
    dist = std::min(dist, A.boundary_distance(X));
  }
  return dist;
}

}  // namespace

GameConstants compute_constants(const NonatomicGameSpec& spec) {
  GameConstants c;
  c.M = spec.bound_M();
  c.B_f = spec.cost().B_f;
  c.B_g = spec.cost().B_g;
  c.L3 = spec.cost().L3;
  c.alpha = spec.s_min()[0];
  Eigen::MatrixXd sym = 0.5 * (spec.cost().D + spec.cost().D.transpose());
  c.beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym)
               .eigenvalues()
               .minCoeff();

  if (!spec.witness())
    fail(ErrorKind::Config,
         "compute_constants: no interior witness profile; the interiority "
         "constants exist but cannot be certified without one (supply "
         "[witness] with xbar and eta)");
  c.eta = spec.eta();

  Eigen::VectorXd Xbar = spec.witness()->integral();
  Eigen::VectorXd Y =
      spec.reference_aggregate() ? *spec.reference_aggregate() : Xbar;
  double dist_Y = dist_to_rbd(spec, Y);
  if (dist_Y <= 0.0)
    fail(ErrorKind::Config,
         "compute_constants: reference aggregate is not strictly interior "
         "to S cap A (distance " +
             std::to_string(dist_Y) + "); supply a reference in [witness]");

  // pull the reference toward the witness by t = dist/(3M); the pulled-in
  // profile keeps slack eta*t pointwise, giving rho; rho_bar measures the
  // pulled-in aggregate
  double t = dist_Y / (3.0 * c.M);
  Eigen::VectorXd Z = Y - t * (Y - Xbar);
  c.rho = (c.eta / (9.0 * c.M)) * dist_Y;
  c.rho_bar = dist_to_rbd(spec, Z) / 3.0;
  c.K_A = (c.M + 1.0) / std::min(c.rho, c.rho_bar);

  std::ostringstream prov;
  prov << "M=" << c.M << " (max vertex norm over X_theta); "
       << "alpha=inf a(s); beta=lambda_min(sym D); "
       << "dist(Y, rbd S^A)=" << dist_Y << " at Y=(" << Y.transpose() << "); "
       << "rho=eta/(9M)*dist; rho_bar=dist(Z, rbd S^A)/3 at Z=("
       << Z.transpose() << "); K_A=(M+1)/min(rho, rho_bar)";
  c.provenance = prov.str();
  return c;
}

namespace {

BoundResult bound_common(const AASMetrics& m, const GameConstants& c,
                         bool constrained, double modulus, bool drop_lambda) {
  if (modulus <= 0.0)
    fail(ErrorKind::Config,
         "bound: the monotonicity modulus must be > 0 (got " +
             std::to_string(modulus) + ")");
  BoundResult r;
  double K = constrained ? c.K_A : 0.0;
  double Dv = constrained ? m.D_cap : 0.0;
  r.gate_lhs = std::max(m.delta, m.D_cap);
  r.gate_rhs = std::min(c.rho, c.rho_bar);
  r.valid = constrained ? (r.gate_lhs < r.gate_rhs) : true;
  double tail = drop_lambda ? m.d_sub : m.d_sub + m.lambda;
  r.value = ((3.0 * c.B_f + 1.0) * K * std::max(Dv, m.delta) +
             (2.0 * c.M + 1.0) * tail) /
            modulus;
  return r;
}

}  // namespace

BoundResult bound_aggregate(const AASMetrics& m, const GameConstants& c,
                            bool constrained) {
  return bound_common(m, c, constrained, c.beta, false);
}

BoundResult bound_profile(const AASMetrics& m, const GameConstants& c,
                          bool constrained, GradMode mode) {
  return bound_common(m, c, constrained, c.alpha, mode == GradMode::Pseudo);
}

namespace {

struct RefinementCell {
  double lo, hi;
  Eigen::VectorXd x_lo, x_hi;  // componentwise feasible box for the cell
  double int_a;                // exact integral of a(s_theta) over the cell
};

// Feasible-for-the-whole-cell box: with affine rhs, a point feasible at both
// endpoints is feasible throughout, so intersect the endpoint boxes.
std::vector<RefinementCell> refine(const NonatomicGameSpec& spec, int n_cells) {
  std::vector<double> cuts;
  for (int k = 0; k <= n_cells; ++k)
    cuts.push_back(static_cast<double>(k) / n_cells);
  for (double b : spec.breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const int T = spec.dim();
  std::vector<RefinementCell> cells;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    RefinementCell c;
    c.lo = cuts[k];
    c.hi = cuts[k + 1];
    if (c.hi - c.lo < 1e-12) continue;
    Eigen::VectorXd b0 = spec.b_at(c.lo + 1e-13), b1 = spec.b_at(c.hi - 1e-13);
    if (spec.action_kind() == PolyKind::Box) {
      c.x_lo = (-b0.tail(T)).cwiseMax(-b1.tail(T));
      c.x_hi = b0.head(T).cwiseMin(b1.head(T));
    } else {
      // feasible point of the endpoint-intersected polytope, turned into a
      // degenerate box seed; sampling stays inside via projection below
      PolytopeSet inter = PolytopeSet::general(spec.action_matrix(),
                                               b0.cwiseMin(b1));
      c.x_lo = inter.feasible_point();
      c.x_hi = inter.feasible_point();
    }
    double a0 = spec.s_at(c.lo + 1e-13)[0], a1 = spec.s_at(c.hi - 1e-13)[0];
    c.int_a = 0.5 * (c.hi - c.lo) * (a0 + a1);
    cells.push_back(std::move(c));
  }
  return cells;
}

}  // namespace

MonotonicityReport check_monotone(const NonatomicGameSpec& spec, int n_pairs,
                                  std::uint64_t seed) {
  if (n_pairs < 1)
    fail(ErrorKind::Config, "check_monotone: n_pairs must be >= 1");
  GameConstants consts = [&] {
    GameConstants c;
    c.alpha = spec.s_min()[0];
    Eigen::MatrixXd sym = 0.5 * (spec.cost().D + spec.cost().D.transpose());
    c.beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym)
                 .eigenvalues()
                 .minCoeff();
    return c;
  }();

  auto cells = refine(spec, 32);
  const int T = spec.dim();
  const int n = static_cast<int>(cells.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto sample = [&] {
    Eigen::MatrixXd v(n, T);
    for (int c = 0; c < n; ++c)
      for (int t = 0; t < T; ++t)
        v(c, t) = cells[c].x_lo[t] +
                  unit(rng) * (cells[c].x_hi[t] - cells[c].x_lo[t]);
    return v;
  };
  auto clamp_cells = [&](Eigen::MatrixXd v) {
    for (int c = 0; c < n; ++c)
      for (int t = 0; t < T; ++t)
        v(c, t) = std::clamp(v(c, t), cells[c].x_lo[t], cells[c].x_hi[t]);
    return v;
  };

  MonotonicityReport rep;
  rep.n_pairs = n_pairs;
  rep.alpha = consts.alpha;
  rep.beta = consts.beta;
  rep.min_gap = rep.min_alpha_margin = rep.min_beta_margin =
      std::numeric_limits<double>::infinity();

  const Eigen::MatrixXd& D = spec.cost().D;
  for (int k = 0; k < n_pairs; ++k) {
    Eigen::MatrixXd x = sample();
    Eigen::MatrixXd y;
    if (k % 2 == 0) {
      y = sample();
    } else {
      // coherent shift: same displacement for every cell, the direction that
      // makes an indefinite aggregate term bite
      Eigen::VectorXd v(T);
      for (int t = 0; t < T; ++t) v[t] = 2.0 * unit(rng) - 1.0;
      y = clamp_cells(x.rowwise() + v.transpose());
    }
    Eigen::MatrixXd dv = x - y;
    Eigen::VectorXd dX = Eigen::VectorXd::Zero(T);
    double dx2 = 0.0, quad = 0.0;
    for (int c = 0; c < n; ++c) {
      double w = cells[c].hi - cells[c].lo;
      dX += w * dv.row(c).transpose();
      dx2 += w * dv.row(c).squaredNorm();
      quad += cells[c].int_a * dv.row(c).squaredNorm();
    }
    double gap = dX.dot(D * dX) + quad;
    rep.min_gap = std::min(rep.min_gap, gap);
    rep.min_alpha_margin =
        std::min(rep.min_alpha_margin, gap - consts.alpha * dx2);
    rep.min_beta_margin =
        std::min(rep.min_beta_margin, gap - consts.beta * dX.squaredNorm());
  }
  return rep;
}

MonotonicityReport check_monotone(const FiniteGame& game, GradMode mode,
                                  int n_pairs, std::uint64_t seed) {
  if (n_pairs < 1)
    fail(ErrorKind::Config, "check_monotone: n_pairs must be >= 1");
  const int I = game.players();
  const int T = game.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < I; ++i)
    alpha = std::min(alpha, CostFamily::a_of(game.params(i)));
  Eigen::MatrixXd sym = 0.5 * (game.cost().D + game.cost().D.transpose());
  double beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym)
                    .eigenvalues()
                    .minCoeff();

  auto feasible = [&](const Eigen::MatrixXd& raw) {
    Eigen::MatrixXd out(I, T);
    for (int i = 0; i < I; ++i)
      out.row(i) = project_polytope(game.action_set(i), raw.row(i).transpose())
                       .transpose();
    return out;
  };
  auto sample = [&] {
    Eigen::MatrixXd raw(I, T);
    for (int i = 0; i < I; ++i) {
      double r = game.action_set(i).radius();
      for (int t = 0; t < T; ++t) raw(i, t) = r * unit(rng);
    }
    return feasible(raw);
  };

  MonotonicityReport rep;
  rep.n_pairs = n_pairs;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.min_gap = rep.min_alpha_margin = rep.min_beta_margin =
      std::numeric_limits<double>::infinity();

  for (int k = 0; k < n_pairs; ++k) {
    Eigen::MatrixXd x = sample();
    Eigen::MatrixXd y;
    if (k % 2 == 0) {
      y = sample();
    } else {
      Eigen::VectorXd v(T);
      for (int t = 0; t < T; ++t) v[t] = unit(rng);
      Eigen::MatrixXd shifted = x;
      for (int i = 0; i < I; ++i)
        shifted.row(i) += game.weight(i) * v.transpose();
      y = feasible(shifted);
    }
    Eigen::MatrixXd dG =
        operator_value(game, x, mode) - operator_value(game, y, mode);
    Eigen::MatrixXd dx = x - y;
    double gap = (dG.array() * dx.array()).sum();
    double dx2 = 0.0;
    for (int i = 0; i < I; ++i)
      dx2 += dx.row(i).squaredNorm() / game.weight(i);
    Eigen::VectorXd dX = aggregate_of(dx);
    rep.min_gap = std::min(rep.min_gap, gap);
    rep.min_alpha_margin = std::min(rep.min_alpha_margin, gap - alpha * dx2);
    rep.min_beta_margin =
        std::min(rep.min_beta_margin, gap - beta * dX.squaredNorm());
  }
  return rep;
}

}  // namespace aggsolve
