#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aggsolve/game_model.hpp"
#include "aggsolve/geometry.hpp"

namespace aggsolve {

/// The variational Wardrop equilibrium of an LQ benchmark game, stored as an
/// exact piecewise profile: on each theta segment every coordinate is either
/// affine (clipped at a box face) or rational affine/affine (interior best
/// response (b_u(s_theta) - c(X*) - p) / a(s_theta)). Integrals are closed
/// form, so downstream error measurements carry no quadrature error.
class WardropSolution {
 public:
  struct Coord {
    bool rational = false;
    // rational: u(t)/v(t), both affine in global theta
    double u0 = 0, u1 = 0, v0 = 1, v1 = 0;
    // affine fallback (clipped value or constant-denominator reduction)
    double w0 = 0, w1 = 0;
  };
  struct Segment {
    double lo, hi;
    std::vector<Coord> coords;
  };

  Eigen::VectorXd aggregate;     // X*
  Eigen::VectorXd price_shift;   // p = sum_k lambda_k a_k
  Eigen::VectorXd multipliers;   // per constraint row of A (empty if none)
  double certificate_margin = 0; // worst pointwise VI slack observed (>= -1e-8)
  std::vector<Segment> segments;

  Eigen::VectorXd value_at(double theta) const;
  Eigen::VectorXd integral(double c, double d) const;
  Eigen::VectorXd integral() const { return integral(0.0, 1.0); }
  double norm_sq(double c, double d) const;
  double norm_sq() const { return norm_sq(0.0, 1.0); }
  /// Exact L2 error  int ||x*_theta - s_theta||^2 dtheta  against a step
  /// profile (the embedded finite equilibrium psi(x^hat)).
  double step_error_sq(const StepProfile& s) const;
};

struct OracleOptions {
  double damping_scale = 1.0;  // multiplies 1/(1 + ||D|| int(1/a))
  double fp_tol = 1e-13;
  int max_fp_iters = 200000;
  double mult_tol = 1e-12;  // bisection tolerance on multipliers
  double cert_tol = 1e-8;
  int cert_samples = 1000;
};

/// Ground-truth VWE for LQ specs with box action sets and a box/polyhedral
/// aggregate constraint: damped aggregate fixed point
///   X <- int clip((b_u(s) - d - D X - p) / a(s)) dtheta
/// with per-face multipliers bisected to complementarity, then certified
/// pointwise. Independent of the VI solver path.
WardropSolution we_oracle(const NonatomicGameSpec& spec,
                          const OracleOptions& opts = {});

/// Exact VNE/pseudo-VNE of tiny finite games (I <= 3, T <= 2, box sets,
/// box/absent aggregate) by enumeration of all active-set sign patterns of
/// the box and aggregate constraints.
Eigen::MatrixXd kkt_brute(const FiniteGame& game, GradMode mode);

/// The packaged benchmark instances (each passes its monotonicity
/// certificate with the declared moduli).
std::vector<std::pair<std::string, NonatomicGameSpec>> benchmark_suite();

/// A deliberately non-monotone variant (negative price slope dominating the
/// utility curvature); check_monotone must fail on it.
NonatomicGameSpec adversarial_spec();

}  // namespace aggsolve
