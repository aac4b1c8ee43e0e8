// dynamics.hpp - time evolution of the Dicke ladder.
//
// Three solvers share one trajectory type:
//   * solve_rate_equations: populations only, undriven cascade
//       p_n' = -Gamma_n p_n + Gamma_{n+1} p_{n+1}
//   * solve_driven_coherences: all (N+1)^2 flip-operator expectations
//     <A_{m,n}> = <|m><n|> with a coherent drive, written in the frame rotating
//     at the laser frequency; damping enters through four-index rates
//   * solve_lindblad: symmetric-subspace master equation, used as the
//     independent reference for the coherence solver
//
// All solvers start from the fully inverted level unless told otherwise.

#pragma once

#include "pdicke/dicke_ladder.hpp"
#include "pdicke/ode.hpp"
#include "pdicke/time_series.hpp"

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pdicke {

struct SolverOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  long max_steps = 5'000'000;
  int output_intervals = 2000;  // reporting grid has output_intervals + 1 points

  void validate() const;
  ode::Tolerances tolerances() const { return {rtol, atol, max_steps}; }
};

enum class DriveMode {
  kRotatingWave,  // counter-rotating terms dropped
  kFullCosine,    // E cos(w_L t) kept in full; for small-N checks of the RWA
};

struct DriveConfig {
  double intensity = 0.0;  // W/m^2
  double detuning = 0.0;   // w_L - w_A, rad/s
  DriveMode mode = DriveMode::kRotatingWave;
  /// Real field polarization; when unset the field is taken parallel to the
  /// dipole so that Omega = |d| E / hbar.
  std::optional<Eigen::Vector3d> field_polarization;

  double omega_laser(double omega_a) const { return omega_a + detuning; }

  /// Throws DomainError on negative intensity; returns a warning when the
  /// rotating-wave approximation is questionable (|detuning| / w_A > 1e-3).
  std::optional<std::string> validate(double omega_a) const;
};

/// Plane-wave amplitude E = sqrt(2 I / (eps0 c)), V/m.
double field_amplitude_from_intensity(double intensity);

/// Omega = d . E / hbar for the configured drive (rad/s).
Complex rabi_frequency(const EnsembleConfig& cfg, const DriveConfig& drive);

struct LevelTrajectory {
  int n_atoms = 0;
  std::vector<double> times;
  Eigen::MatrixXd populations;  // rows: time samples, cols: level n = 0..N
  /// coherences[i](m, n) = <A_{m,n}>(t_i); empty for the rate solver.
  std::vector<Eigen::MatrixXcd> coherences;
  /// Driven results are trusted only for t <= validity_limit (0.3 / Gamma).
  double validity_limit = std::numeric_limits<double>::infinity();

  std::size_t size() const { return times.size(); }
  bool driven() const { return !coherences.empty(); }
  bool valid_at(std::size_t i) const { return times.at(i) <= validity_limit; }
  double population(std::size_t i, int level) const { return populations(static_cast<Eigen::Index>(i), level); }
};

/// Default reporting horizon 10 / (N F_P Gamma0): about ten burst widths.
double default_t_max(const RateLadder& ladder);

/// Integrate the population cascade. `initial` (size N+1, summing to 1)
/// defaults to the fully inverted level. Throws NumericalError when the
/// result violates normalization (1e-9) or positivity (-1e-9).
LevelTrajectory solve_rate_equations(const RateLadder& ladder, double t_max,
                                     const SolverOptions& opts,
                                     const std::optional<Eigen::VectorXd>& initial = std::nullopt);

/// I(t) = sum_{n>=1} p_n(t) Gamma_n, in photons per second.
TimeSeries emission_intensity(const LevelTrajectory& traj, const RateLadder& ladder);

struct DrivenOptions {
  int max_atoms = 200;
  /// Multiplies every decay rate; 0 switches spontaneous emission off.
  double decay_scale = 1.0;
  /// Initial density matrix rho (not its transpose); defaults to |N><N|.
  std::optional<Eigen::MatrixXcd> initial_density;
};

/// Symmetric-subspace master equation in the frame rotating at w_L:
///   rho' = -i[H, rho] + Gamma (J- rho J+ - {J+ J-, rho} / 2),
///   H = -Delta n - (Omega c(t) J+ + h.c.),
/// c(t) = 1/2 under the RWA and (1 + e^{2 i w_L t}) / 2 for the full cosine.
/// Throws NumericalError when the trace drifts by more than 1e-8.
LevelTrajectory solve_lindblad(const EnsembleConfig& cfg, const DriveConfig& drive, double t_max,
                               const SolverOptions& opts, const DrivenOptions& driven = {});

/// Flip-operator equations of motion with drive and collective damping, same
/// frame and drive conventions as solve_lindblad. Throws NumericalError when
/// Hermiticity is violated by more than 1e-8.
LevelTrajectory solve_driven_coherences(const EnsembleConfig& cfg, const DriveConfig& drive,
                                        double t_max, const SolverOptions& opts,
                                        const DrivenOptions& driven = {});

/// Largest |sum_n p_n(t) - 1| over the trajectory.
double max_normalization_error(const LevelTrajectory& traj);

}  // namespace pdicke
