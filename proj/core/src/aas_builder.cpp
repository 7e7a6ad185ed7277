#include "aggsolve/aas_builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace aggsolve {

namespace {

constexpr double kDropTol = 1e-12;  // cells thinner than this go to Theta_0

std::vector<double> sorted_unique(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) < kDropTol; }),
            pts.end());
  return pts;
}

}  // namespace

Partition make_uniform_partition(const NonatomicGameSpec& spec, int nu) {
  if (nu < 1)
    fail(ErrorKind::Config, "build_uniform: nu must be >= 1 (got " +
                                std::to_string(nu) + ")");
  std::vector<double> cuts;
  for (int k = 0; k <= nu; ++k) cuts.push_back(static_cast<double>(k) / nu);
  for (double sigma : spec.breakpoints()) cuts.push_back(sigma);
  cuts = sorted_unique(std::move(cuts));

  Partition part;
  part.nu = nu;
  part.method = "uniform";
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double lo = cuts[k], hi = cuts[k + 1];
    if (hi - lo < kDropTol) continue;
    Partition::Cell cell;
    cell.intervals = {{lo, hi}};
    cell.measure = hi - lo;
    cell.rep_theta = 0.5 * (lo + hi);
    cell.b_rep = spec.b_at(cell.rep_theta);
    cell.s_rep = spec.s_at(cell.rep_theta);
    part.cells.push_back(std::move(cell));
  }
  return part;
}

namespace {

struct ParamView {
  // one scalar parameter coordinate as an affine map per characteristic piece
  double lo_val, hi_val;  // global range
};

// Elementary theta-intervals on which every parameter coordinate stays in a
// single meshgrid bin, grouped by bin index vector.
Partition meshgrid_cells(const NonatomicGameSpec& spec, int nu,
                         bool with_theta_axis) {
  const int p = static_cast<int>(spec.action_matrix().rows());
  const int l = spec.cost().param_dim();
  const int n_params = p + l;

  // global parameter ranges (affine pieces: endpoint scan is exact)
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n_params, 1e300);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(n_params, -1e300);
  auto stack = [&](const Eigen::VectorXd& b, const Eigen::VectorXd& s) {
    Eigen::VectorXd v(n_params);
    v << b, s;
    return v;
  };
  for (const auto& piece : spec.pieces()) {
    lo = lo.cwiseMin(stack(piece.b0, piece.s0)).cwiseMin(stack(piece.b1, piece.s1));
    hi = hi.cwiseMax(stack(piece.b0, piece.s0)).cwiseMax(stack(piece.b1, piece.s1));
  }

  // cut points: crossings of each affine parameter map with its bin edges,
  // plus piece boundaries (and uniform theta cuts when the axis is on)
  std::vector<double> cuts = {0.0, 1.0};
  for (const auto& piece : spec.pieces()) {
    cuts.push_back(piece.lo);
    cuts.push_back(piece.hi);
    Eigen::VectorXd v0 = stack(piece.b0, piece.s0), v1 = stack(piece.b1, piece.s1);
    for (int k = 0; k < n_params; ++k) {
      double range = hi[k] - lo[k];
      if (range < kDropTol) continue;
      double slope = v1[k] - v0[k];
      if (std::abs(slope) < kDropTol) continue;
      for (int n = 1; n < nu; ++n) {
        double edge = lo[k] + range * n / nu;
        double t = (edge - v0[k]) / slope;  // affine crossing on [0,1]
        if (t > 0.0 && t < 1.0)
          cuts.push_back(piece.lo + t * (piece.hi - piece.lo));
      }
    }
  }
  if (with_theta_axis)
    for (int k = 0; k <= nu; ++k) cuts.push_back(static_cast<double>(k) / nu);
  cuts = sorted_unique(std::move(cuts));

  // group elementary intervals by bin index (evaluated at midpoints)
  std::map<std::vector<int>, Partition::Cell> groups;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    if (b - a < kDropTol) continue;
    double mid = 0.5 * (a + b);
    Eigen::VectorXd v = stack(spec.b_at(mid), spec.s_at(mid));
    std::vector<int> key(n_params + (with_theta_axis ? 1 : 0));
    for (int j = 0; j < n_params; ++j) {
      double range = hi[j] - lo[j];
      if (range < kDropTol) {
        key[j] = 0;
        continue;
      }
      int bin = static_cast<int>(std::floor((v[j] - lo[j]) / range * nu));
      key[j] = std::clamp(bin, 0, nu - 1);
    }
    if (with_theta_axis)
      key[n_params] = std::min(static_cast<int>(std::floor(mid * nu)), nu - 1);
    auto& cell = groups[key];
    if (!cell.intervals.empty() &&
        std::abs(cell.intervals.back().second - a) < kDropTol)
      cell.intervals.back().second = b;  // merge adjacent
    else
      cell.intervals.push_back({a, b});
    cell.measure += b - a;
  }

  Partition part;
  part.nu = nu;
  part.method = "meshgrid";
  for (auto& [key, cell] : groups) {
    if (cell.measure < kDropTol) continue;  // Theta_0
    // exact cell integrals of b and s over the interval union
    Eigen::VectorXd int_b = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd int_s = Eigen::VectorXd::Zero(l);
    for (const auto& [a, b2] : cell.intervals) {
      // integrate piecewise-affine maps segment by segment
      for (const auto& piece : spec.pieces()) {
        double s0 = std::max(a, piece.lo), s1 = std::min(b2, piece.hi);
        if (s1 <= s0) continue;
        auto lerp_b = [&](double th) {
          double t = (th - piece.lo) / (piece.hi - piece.lo);
          return (piece.b0 + t * (piece.b1 - piece.b0)).eval();
        };
        auto lerp_s = [&](double th) {
          double t = (th - piece.lo) / (piece.hi - piece.lo);
          return (piece.s0 + t * (piece.s1 - piece.s0)).eval();
        };
        int_b += 0.5 * (s1 - s0) * (lerp_b(s0) + lerp_b(s1));
        int_s += 0.5 * (s1 - s0) * (lerp_s(s0) + lerp_s(s1));
      }
    }
    cell.b_rep = int_b;                 // unscaled integral (defines X_n)
    cell.s_rep = int_s / cell.measure;  // cell-average parameter
    cell.rep_theta = 0.5 * (cell.intervals.front().first +
                            cell.intervals.front().second);
    part.cells.push_back(std::move(cell));
  }
  return part;
}

}  // namespace

Partition make_meshgrid_partition(const NonatomicGameSpec& spec, int nu,
                                  bool add_theta_axis) {
  if (nu < 1)
    fail(ErrorKind::Config, "build_meshgrid: nu must be >= 1 (got " +
                                std::to_string(nu) + ")");
  Partition part = meshgrid_cells(spec, nu, add_theta_axis);
  if (!add_theta_axis) {
    bool plateau = false;
    for (const auto& cell : part.cells)
      if (cell.measure > 1.0 / nu + kDropTol) plateau = true;
    if (plateau) {
      part = meshgrid_cells(spec, nu, true);
      part.notice =
          "constant-parameter plateau detected; theta axis appended to the "
          "meshgrid partition";
    }
  }
  return part;
}

FiniteGame instantiate(const NonatomicGameSpec& spec, const Partition& part) {
  const int T = spec.dim();
  std::vector<double> mu;
  std::vector<PolytopeSet> sets;
  std::vector<Eigen::VectorXd> s_bar;
  std::vector<ProvenanceCell> cells;

  for (const auto& cell : part.cells) {
    mu.push_back(cell.measure);
    if (part.method == "uniform") {
      // X_i = mu_i * X_{rep}: rows (A, mu_i * b_rep)
      Eigen::VectorXd b = cell.measure * cell.b_rep;
      if (spec.action_kind() == PolyKind::Box)
        sets.push_back(PolytopeSet::box(-b.tail(T), b.head(T)));
      else
        sets.push_back(PolytopeSet::general(spec.action_matrix(), b));
    } else {
      // X_n = {A x <= int_b}; b_rep already holds the unscaled integral
      if (spec.action_kind() == PolyKind::Box)
        sets.push_back(PolytopeSet::box(-cell.b_rep.tail(T), cell.b_rep.head(T)));
      else
        sets.push_back(PolytopeSet::general(spec.action_matrix(), cell.b_rep));
    }
    s_bar.push_back(cell.s_rep);
    ProvenanceCell pc;
    pc.intervals = cell.intervals;
    pc.measure = cell.measure;
    pc.rep_theta = cell.rep_theta;
    cells.push_back(std::move(pc));
  }

  // weights were built from a partition of [0,1] minus null cells; renormalize
  // the residual round-off so the closure invariant holds exactly
  double total = 0.0;
  for (double m : mu) total += m;
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorKind::Config, "builder: partition cells lost measure");
  for (double& m : mu) m /= total;

  return FiniteGame(T, std::move(mu), std::move(sets), std::move(s_bar),
                    spec.cost(), spec.aggregate(), std::move(cells));
}

FiniteGame build_uniform(const NonatomicGameSpec& spec, int nu) {
  return instantiate(spec, make_uniform_partition(spec, nu));
}

FiniteGame build_meshgrid(const NonatomicGameSpec& spec, int nu,
                          bool add_theta_axis, std::string* notice) {
  Partition part = make_meshgrid_partition(spec, nu, add_theta_axis);
  if (notice) *notice = part.notice;
  return instantiate(spec, part);
}

}  // namespace aggsolve
