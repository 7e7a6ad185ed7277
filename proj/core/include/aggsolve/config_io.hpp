#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aggsolve/game_model.hpp"
#include "aggsolve/vi_solver.hpp"

namespace aggsolve {

struct SweepSettings {
  std::vector<int> nus;
  std::string method = "uniform";  // uniform | meshgrid
  bool add_theta_axis = false;
};

/// A parsed config: the nonatomic game plus solver and sweep settings.
/// Files written by cmd_build additionally embed the realized finite game,
/// which sweeps then use instead of rebuilding.
struct LoadedConfig {
  NonatomicGameSpec spec;
  SolverConfig solver;
  SweepSettings sweep;
  std::optional<FiniteGame> built_game;
  int built_nu = 0;
  std::string built_method;
};

LoadedConfig parse_config(const std::string& text,
                          const std::string& source_name = "<string>");
LoadedConfig load_config(const std::string& path);

/// Round-trippable text form of a spec (with solver/sweep sections).
std::string serialize_spec(const NonatomicGameSpec& spec,
                           const SolverConfig& solver,
                           const SweepSettings& sweep);

/// serialize_spec plus the [finite_game]/[player_*] sections describing one
/// built AAS element (players, weights, polytopes, parameters, provenance).
std::string serialize_game(const NonatomicGameSpec& spec,
                           const SolverConfig& solver,
                           const SweepSettings& sweep, const FiniteGame& game,
                           int nu, const std::string& method);

}  // namespace aggsolve
