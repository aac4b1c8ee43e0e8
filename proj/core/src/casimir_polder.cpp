#include "pdicke/casimir_polder.hpp"

#include "pdicke/constants.hpp"
#include "pdicke/errors.hpp"

namespace pdicke {

double single_atom_resonant_potential(Environment env, const Position3& r,
                                      const DipoleVector& dipole, double omega_a,
                                      double omega_l) {
  require_in_domain(env, r);
  if (!(omega_a > 0.0) || !(omega_l > 0.0)) {
    throw DomainError("single_atom_resonant_potential: frequencies must be positive");
  }
  if (env == Environment::kFreeSpace) {
    return 0.0;
  }
  const RealTensor re_scattered = mirror_scatter_green(r, r, omega_a).real();
  return -constants::kVacuumPermeability * omega_l * omega_l *
         contract(dipole, re_scattered, dipole).real();
}

PotentialLadder build_potential_ladder(const EnsembleConfig& cfg, double u_single) {
  if (cfg.n_atoms < 1) {
    throw DomainError("atom count must be >= 1");
  }
  PotentialLadder ladder;
  ladder.n_atoms = cfg.n_atoms;
  ladder.u_single = u_single;
  ladder.coefficients.assign(static_cast<std::size_t>(cfg.n_atoms) + 1, 0);
  for (int n = 1; n <= cfg.n_atoms; ++n) {
    ladder.coefficients[static_cast<std::size_t>(n)] = transition_coefficient(cfg.n_atoms, n);
  }
  return ladder;
}

TimeSeries collective_potential(const LevelTrajectory& traj, const PotentialLadder& ladder) {
  if (traj.n_atoms != ladder.n_atoms ||
      traj.populations.cols() != static_cast<Eigen::Index>(ladder.coefficients.size())) {
    throw DomainError("collective_potential: trajectory and ladder disagree on N");
  }
  TimeSeries series;
  series.times = traj.times;
  series.values.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    // Weight the integer coefficients first so u_single enters once.
    double weighted = 0.0;
    for (int n = 1; n <= ladder.n_atoms; ++n) {
      weighted += traj.population(i, n) *
                  static_cast<double>(ladder.coefficients[static_cast<std::size_t>(n)]);
    }
    series.values[i] = weighted * ladder.u_single;
  }
  series.meta.quantity = "potential";
  series.meta.n_atoms = ladder.n_atoms;
  return series;
}

}  // namespace pdicke
