#include "pdicke/dynamics.hpp"

#include "pdicke/constants.hpp"
#include "pdicke/errors.hpp"

#include <cmath>
#include <sstream>

namespace pdicke {

namespace {

constexpr double kPopulationTolerance = 1e-9;
constexpr double kTraceTolerance = 1e-8;
constexpr double kHermiticityTolerance = 1e-8;
constexpr double kDrivenValidity = 0.3;  // in units of 1 / (F_P Gamma0)

void require_horizon(double t_max) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("integration horizon must be positive and finite");
  }
}

std::string format_time(double t) {
  std::ostringstream os;
  os.precision(6);
  os << t;
  return os.str();
}

void check_populations(const LevelTrajectory& traj) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto row = traj.populations.row(static_cast<Eigen::Index>(i));
    const double sum = row.sum();
    if (std::abs(sum - 1.0) > kPopulationTolerance) {
      throw NumericalError("normalization lost at t = " + format_time(traj.times[i]) +
                               " s (sum p = " + format_time(sum) + ")",
                           traj.times[i]);
    }
    if (row.minCoeff() < -kPopulationTolerance) {
      throw NumericalError("negative population at t = " + format_time(traj.times[i]) + " s",
                           traj.times[i]);
    }
  }
}

/// Collective lowering operator J-: (J-)(n-1, n) = sqrt(n (N - n + 1)).
Eigen::MatrixXcd lowering_operator(int n_atoms) {
  const int dim = n_atoms + 1;
  Eigen::MatrixXcd jm = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n <= n_atoms; ++n) {
    jm(n - 1, n) = collective_dipole_factor(n_atoms, n);
  }
  return jm;
}

Eigen::MatrixXcd initial_density(const EnsembleConfig& cfg, const DrivenOptions& driven) {
  const int dim = cfg.n_atoms + 1;
  if (driven.initial_density) {
    const auto& rho = *driven.initial_density;
    if (rho.rows() != dim || rho.cols() != dim) {
      throw DomainError("initial density matrix must be (N+1)x(N+1)");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kTraceTolerance) {
      throw DomainError("initial density matrix must have unit trace");
    }
    return rho;
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(cfg.n_atoms, cfg.n_atoms) = 1.0;
  return rho;
}

struct DrivenSetup {
  double gamma = 0.0;   // F_P Gamma0 scaled by decay_scale
  double gamma_unscaled = 0.0;
  Complex omega_rabi;   // d . E / hbar
  double omega_laser = 0.0;
  double detuning = 0.0;
  bool full_cosine = false;

  /// Drive envelope c(t) multiplying Omega on the raising transitions.
  Complex envelope(double t) const {
    if (!full_cosine) return 0.5;
    return 0.5 * (1.0 + std::polar(1.0, 2.0 * omega_laser * t));
  }
};

DrivenSetup prepare_driven(const EnsembleConfig& cfg, const DriveConfig& drive,
                           const DrivenOptions& driven, double t_max, const SolverOptions& opts) {
  cfg.validate();
  drive.validate(cfg.omega_a);
  opts.validate();
  require_horizon(t_max);
  if (cfg.n_atoms > driven.max_atoms) {
    throw DomainError("driven solvers are capped at N = " + std::to_string(driven.max_atoms));
  }
  if (!(driven.decay_scale >= 0.0)) {
    throw DomainError("decay_scale must be nonnegative");
  }
  DrivenSetup s;
  s.gamma_unscaled = free_space_rate(cfg.omega_a, cfg.dipole) *
                     purcell_factor(cfg.environment, cfg.position, cfg.dipole, cfg.omega_a);
  s.gamma = driven.decay_scale * s.gamma_unscaled;
  s.omega_rabi = rabi_frequency(cfg, drive);
  s.omega_laser = drive.omega_laser(cfg.omega_a);
  s.detuning = drive.detuning;
  s.full_cosine = drive.mode == DriveMode::kFullCosine;
  return s;
}

LevelTrajectory allocate(int n_atoms, std::vector<double> times) {
  LevelTrajectory traj;
  traj.n_atoms = n_atoms;
  traj.populations = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), n_atoms + 1);
  traj.times = std::move(times);
  return traj;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
  if (max_steps < 1) throw DomainError("solver max_steps must be positive");
  if (output_intervals < 1) throw DomainError("solver output grid needs at least one interval");
}

std::optional<std::string> DriveConfig::validate(double omega_a) const {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw DomainError("drive intensity must be nonnegative");
  }
  if (!std::isfinite(detuning)) throw DomainError("drive detuning must be finite");
  if (field_polarization && !(field_polarization->norm() > 0.0)) {
    throw DomainError("drive field polarization must be nonzero");
  }
  if (omega_a > 0.0 && std::abs(detuning) / omega_a > 1e-3) {
    return "detuning/omega_A = " + format_time(std::abs(detuning) / omega_a) +
           " exceeds 1e-3; the rotating-wave approximation may be inaccurate";
  }
  return std::nullopt;
}

double field_amplitude_from_intensity(double intensity) {
  if (!(intensity >= 0.0)) throw DomainError("intensity must be nonnegative");
  return std::sqrt(2.0 * intensity / (constants::kVacuumPermittivity * constants::kSpeedOfLight));
}

Complex rabi_frequency(const EnsembleConfig& cfg, const DriveConfig& drive) {
  const double amplitude = field_amplitude_from_intensity(drive.intensity);
  if (!drive.field_polarization) {
    return cfg.dipole.norm() * amplitude / constants::kHbar;
  }
  const Eigen::Vector3cd e_hat = drive.field_polarization->normalized().cast<Complex>();
  return (cfg.dipole.transpose() * e_hat).value() * amplitude / constants::kHbar;
}

std::vector<double> uniform_grid(double t_max, int intervals) {
  if (intervals < 1) throw DomainError("uniform_grid needs at least one interval");
  std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    grid[static_cast<std::size_t>(i)] = t_max * (static_cast<double>(i) / intervals);
  }
  return grid;
}

double default_t_max(const RateLadder& ladder) {
  return 10.0 / (ladder.n_atoms * ladder.single_atom_rate());
}

double max_normalization_error(const LevelTrajectory& traj) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < traj.populations.rows(); ++i) {
    worst = std::max(worst, std::abs(traj.populations.row(i).sum() - 1.0));
  }
  return worst;
}

LevelTrajectory solve_rate_equations(const RateLadder& ladder, double t_max,
                                     const SolverOptions& opts,
                                     const std::optional<Eigen::VectorXd>& initial) {
  opts.validate();
  require_horizon(t_max);
  const int n_atoms = ladder.n_atoms;
  if (n_atoms < 1 || ladder.rates.size() != static_cast<std::size_t>(n_atoms) + 1) {
    throw DomainError("rate ladder is malformed");
  }

  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(n_atoms + 1);
  if (initial) {
    if (initial->size() != n_atoms + 1) {
      throw DomainError("initial distribution must have N+1 entries");
    }
    if (std::abs(initial->sum() - 1.0) > kPopulationTolerance || initial->minCoeff() < 0.0) {
      throw DomainError("initial distribution must be nonnegative and sum to 1");
    }
    p0 = *initial;
  } else {
    p0(n_atoms) = 1.0;
  }

  const Eigen::Map<const Eigen::VectorXd> rates(ladder.rates.data(), n_atoms + 1);
  auto rhs = [&rates, n_atoms](double, const Eigen::VectorXd& p, Eigen::VectorXd& dp) {
    // Level 0 has rate 0, so it only gains.
    dp = -rates.cwiseProduct(p);
    dp.head(n_atoms) += rates.tail(n_atoms).cwiseProduct(p.tail(n_atoms));
  };

  LevelTrajectory traj = allocate(n_atoms, uniform_grid(t_max, opts.output_intervals));
  ode::integrate(rhs, 0.0, p0, std::span<const double>(traj.times), opts.tolerances(),
                 [&traj](std::size_t i, double, const Eigen::VectorXd& p) {
                   traj.populations.row(static_cast<Eigen::Index>(i)) = p.transpose();
                 });
  check_populations(traj);
  return traj;
}

TimeSeries emission_intensity(const LevelTrajectory& traj, const RateLadder& ladder) {
  if (traj.n_atoms != ladder.n_atoms ||
      traj.populations.cols() != static_cast<Eigen::Index>(ladder.rates.size())) {
    throw DomainError("emission_intensity: trajectory and ladder disagree on N");
  }
  TimeSeries series;
  series.times = traj.times;
  series.values.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    double sum = 0.0;
    for (int n = 1; n <= ladder.n_atoms; ++n) {
      sum += traj.population(i, n) * ladder.rates[static_cast<std::size_t>(n)];
    }
    series.values[i] = sum;
  }
  series.meta.quantity = "intensity";
  series.meta.n_atoms = ladder.n_atoms;
  series.meta.purcell = ladder.purcell;
  series.meta.gamma0 = ladder.gamma0;
  return series;
}

LevelTrajectory solve_lindblad(const EnsembleConfig& cfg, const DriveConfig& drive, double t_max,
                               const SolverOptions& opts, const DrivenOptions& driven) {
  const DrivenSetup s = prepare_driven(cfg, drive, driven, t_max, opts);
  const int dim = cfg.n_atoms + 1;

  const Eigen::MatrixXcd jm = lowering_operator(cfg.n_atoms);
  const Eigen::MatrixXcd jp = jm.adjoint();
  const Eigen::MatrixXcd jpjm = jp * jm;
  Eigen::MatrixXcd h_static = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h_static(n, n) = -s.detuning * n;

  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    const Complex coupling = s.omega_rabi * s.envelope(t);
    const Eigen::MatrixXcd h = h_static - coupling * jp - std::conj(coupling) * jm;
    dy.resize(y.size());
    Eigen::Map<Eigen::MatrixXcd> drho(dy.data(), dim, dim);
    const Complex i_unit(0.0, 1.0);
    drho = -i_unit * (h * rho - rho * h) +
           s.gamma * (jm * rho * jp - 0.5 * (jpjm * rho + rho * jpjm));
  };

  LevelTrajectory traj = allocate(cfg.n_atoms, uniform_grid(t_max, opts.output_intervals));
  traj.coherences.resize(traj.size());
  traj.validity_limit = kDrivenValidity / s.gamma_unscaled;

  const Eigen::MatrixXcd rho0 = initial_density(cfg, driven);
  const Eigen::VectorXcd y0 = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), rho0.size());
  ode::integrate(rhs, 0.0, y0, std::span<const double>(traj.times), opts.tolerances(),
                 [&](std::size_t i, double t, const Eigen::VectorXcd& y) {
                   const Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
                   const Complex trace = rho.trace();
                   if (std::abs(trace - Complex(1.0, 0.0)) > kTraceTolerance) {
                     throw NumericalError("lindblad: trace deviates from 1 by " +
                                              format_time(std::abs(trace - 1.0)) + " at t = " +
                                              format_time(t) + " s",
                                          t);
                   }
                   traj.coherences[i] = rho.transpose();
                   traj.populations.row(static_cast<Eigen::Index>(i)) =
                       rho.diagonal().real().transpose();
                 });
  check_populations(traj);
  return traj;
}

LevelTrajectory solve_driven_coherences(const EnsembleConfig& cfg, const DriveConfig& drive,
                                        double t_max, const SolverOptions& opts,
                                        const DrivenOptions& driven) {
  const DrivenSetup s = prepare_driven(cfg, drive, driven, t_max, opts);
  const int n_atoms = cfg.n_atoms;
  const int dim = n_atoms + 1;
  const FourIndexRates four(cfg);

  // gain(m, n) feeds <A_{m,n}> from <A_{m+1,n+1}>; damp(m, n) is its loss rate.
  Eigen::MatrixXcd gain = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd damp = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      gain(m, n) = driven.decay_scale * (four(m + 1, m, n, n + 1) + four(n, n + 1, m + 1, m));
      damp(m, n) = driven.decay_scale * (four(n, n - 1, n - 1, n) + four(m - 1, m, m, m - 1));
    }
  }
  // f[n] = sqrt(n (N - n + 1)) for the n -> n-1 transition; f[0] unused.
  std::vector<double> f(static_cast<std::size_t>(dim), 0.0);
  for (int n = 1; n <= n_atoms; ++n) f[static_cast<std::size_t>(n)] = collective_dipole_factor(n_atoms, n);

  const Complex i_unit(0.0, 1.0);
  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const Eigen::Map<const Eigen::MatrixXcd> c(y.data(), dim, dim);
    dy.resize(y.size());
    Eigen::Map<Eigen::MatrixXcd> dc(dy.data(), dim, dim);

    // Matrix elements E . d_{j,k} / hbar in the rotating frame:
    // w(j, j-1) = f_j Omega c(t), w(j-1, j) = conj of that.
    const Complex down = s.omega_rabi * s.envelope(t);
    const auto w = [&](int j, int k) -> Complex {
      if (j == k + 1) return f[static_cast<std::size_t>(j)] * down;
      return f[static_cast<std::size_t>(k)] * std::conj(down);
    };

    for (int n = 0; n < dim; ++n) {
      for (int m = 0; m < dim; ++m) {
        Complex v = i_unit * (-s.detuning) * static_cast<double>(m - n) * c(m, n);
        if (n + 1 <= n_atoms) v += i_unit * w(n, n + 1) * c(m, n + 1);
        if (n - 1 >= 0) v += i_unit * w(n, n - 1) * c(m, n - 1);
        if (m + 1 <= n_atoms) v -= i_unit * w(m + 1, m) * c(m + 1, n);
        if (m - 1 >= 0) v -= i_unit * w(m - 1, m) * c(m - 1, n);
        if (m + 1 <= n_atoms && n + 1 <= n_atoms) v += gain(m, n) * c(m + 1, n + 1);
        v -= damp(m, n) * c(m, n);
        dc(m, n) = v;
      }
    }
  };

  LevelTrajectory traj = allocate(n_atoms, uniform_grid(t_max, opts.output_intervals));
  traj.coherences.resize(traj.size());
  traj.validity_limit = kDrivenValidity / s.gamma_unscaled;

  const Eigen::MatrixXcd c0 = initial_density(cfg, driven).transpose();
  const Eigen::VectorXcd y0 = Eigen::Map<const Eigen::VectorXcd>(c0.data(), c0.size());
  ode::integrate(rhs, 0.0, y0, std::span<const double>(traj.times), opts.tolerances(),
                 [&](std::size_t i, double t, const Eigen::VectorXcd& y) {
                   const Eigen::Map<const Eigen::MatrixXcd> c(y.data(), dim, dim);
                   const double asymmetry = (c - c.adjoint()).cwiseAbs().maxCoeff();
                   if (asymmetry > kHermiticityTolerance) {
                     throw NumericalError("coherences lost Hermiticity (" +
                                              format_time(asymmetry) + ") at t = " +
                                              format_time(t) + " s",
                                          t);
                   }
                   traj.coherences[i] = c;
                   traj.populations.row(static_cast<Eigen::Index>(i)) =
                       c.diagonal().real().transpose();
                 });
  check_populations(traj);
  return traj;
}

}  // namespace pdicke
