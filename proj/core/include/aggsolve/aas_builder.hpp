#pragma once

#include <string>
#include <vector>

#include "aggsolve/game_model.hpp"

namespace aggsolve {

/// The theta-partition generating one AAS element, with per-cell
/// representatives and generation metadata.
struct Partition {
  struct Cell {
    std::vector<std::pair<double, double>> intervals;
    double measure = 0.0;
    double rep_theta = 0.0;
    Eigen::VectorXd b_rep, s_rep;
  };
  std::vector<Cell> cells;
  int nu = 0;
  std::string method;
  std::string notice;  // set when the theta axis was auto-appended
};

/// Uniform splitting: cut [0,1] at {k/nu} plus the profile's breakpoints,
/// take cell midpoints as representatives, and scale sets and costs by the
/// cell measure. The aggregate constraint carries over unchanged.
Partition make_uniform_partition(const NonatomicGameSpec& spec, int nu);

/// Meshgrid approximation: partition the parameter box of (b, s) into nu
/// bins per coordinate and group theta by bin preimage (exact interval
/// arithmetic on the affine pieces). Cells get the exact rhs integral and
/// the cell-average cost parameter. With add_theta_axis, [0,1] is also cut
/// into nu segments (auto-enabled with a notice when a cell would otherwise
/// exceed measure 1/nu).
Partition make_meshgrid_partition(const NonatomicGameSpec& spec, int nu,
                                  bool add_theta_axis = false);

/// Instantiate the finite game G^nu(A^nu) from a partition.
FiniteGame instantiate(const NonatomicGameSpec& spec, const Partition& part);

FiniteGame build_uniform(const NonatomicGameSpec& spec, int nu);
FiniteGame build_meshgrid(const NonatomicGameSpec& spec, int nu,
                          bool add_theta_axis = false,
                          std::string* notice = nullptr);

}  // namespace aggsolve
