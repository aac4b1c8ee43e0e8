// casimir_polder.hpp - resonant collective Casimir-Polder potential

#pragma once

#include "pdicke/dicke_ladder.hpp"
#include "pdicke/dynamics.hpp"
#include "pdicke/time_series.hpp"

#include <cstdint>
#include <vector>

namespace pdicke {

/// -mu0 w_L^2 d . Re G1(r, r, w_A) . d*, in joules. Zero in free space.
/// Undriven runs pass omega_l = omega_a.
double single_atom_resonant_potential(Environment env, const Position3& r,
                                      const DipoleVector& dipole, double omega_a,
                                      double omega_l);

struct PotentialLadder {
  int n_atoms = 0;
  double u_single = 0.0;  // J
  /// coefficients[n] = n (N - n + 1) for n = 1..N; coefficients[0] = 0.
  std::vector<std::int64_t> coefficients;

  double level_potential(int level) const {
    return static_cast<double>(coefficients.at(static_cast<std::size_t>(level))) * u_single;
  }
};

PotentialLadder build_potential_ladder(const EnsembleConfig& cfg, double u_single);

/// U(t) = sum_{n>=1} p_n(t) n (N - n + 1) u_single. Works on any trajectory,
/// using the populations (the diagonal slice for driven solvers).
TimeSeries collective_potential(const LevelTrajectory& traj, const PotentialLadder& ladder);

}  // namespace pdicke
