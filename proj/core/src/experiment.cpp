#include "pdicke/experiment.hpp"

#include "parallel.hpp"
#include "pdicke/casimir_polder.hpp"
#include "pdicke/constants.hpp"
#include "pdicke/dicke_ladder.hpp"
#include "pdicke/dynamics.hpp"
#include "pdicke/em_greens.hpp"
#include "pdicke/errors.hpp"
#include "pdicke/fidelity.hpp"
#include "pdicke/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

namespace pdicke {

namespace {

double resolved_t_max(const RunConfig& cfg, const RateLadder& ladder) {
  return cfg.t_max ? *cfg.t_max : default_t_max(ladder);
}

double potential_omega(const RunConfig& cfg) {
  return cfg.drive ? cfg.drive->omega_laser(cfg.omega_a) : cfg.omega_a;
}

LevelTrajectory solve(const RunConfig& cfg, const EnsembleConfig& ens, const RateLadder& ladder) {
  const double t_max = resolved_t_max(cfg, ladder);
  if (cfg.drive) return solve_driven_coherences(ens, *cfg.drive, t_max, cfg.solver);
  return solve_rate_equations(ladder, t_max, cfg.solver);
}

CsvTable series_table(const TimeSeries& series, const LevelTrajectory& traj,
                      const std::string& value_column, const std::string& scaled_column,
                      double scale) {
  CsvTable table;
  table.header = {"t_s", value_column, scaled_column};
  if (traj.driven()) table.header.push_back("valid");
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<std::string> row{format_scientific(series.times[i]),
                                 format_scientific(series.values[i]),
                                 format_scientific(scale != 0.0 ? series.values[i] / scale
                                                                : std::nan(""))};
    if (traj.driven()) row.push_back(traj.valid_at(i) ? "1" : "0");
    table.rows.push_back(std::move(row));
  }
  return table;
}

using Manifest = std::vector<std::pair<std::string, std::string>>;

void add(Manifest& m, std::string key, double value) {
  m.emplace_back(std::move(key), format_roundtrip(value));
}

std::string manifest_text(const RunConfig& cfg, const Manifest& entries) {
  std::ostringstream os;
  os << "# pdicke run manifest\n";
  for (const auto& [key, value] : entries) os << key << " = " << value << "\n";
  os << "\n# configuration\n" << serialize_config(cfg);
  return os.str();
}

std::string join_files(const std::vector<std::filesystem::path>& files) {
  std::string out;
  for (const auto& f : files) {
    if (!out.empty()) out += ", ";
    out += f.filename().string();
  }
  return out;
}

std::vector<std::pair<double, double>> fit_points(const std::vector<ScalingRow>& rows,
                                                  int min_atoms,
                                                  const std::function<double(const ScalingRow&)>& y) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.n_atoms >= min_atoms) pts.emplace_back(static_cast<double>(r.n_atoms), y(r));
  }
  return pts;
}

}  // namespace

DerivedQuantities derive_quantities(const RunConfig& cfg) {
  const EnsembleConfig ens = cfg.ensemble();
  ens.validate();
  DerivedQuantities q;
  q.gamma0 = free_space_rate(ens.omega_a, ens.dipole);
  q.purcell = purcell_factor(ens.environment, ens.position, ens.dipole, ens.omega_a);
  q.single_atom_rate = q.purcell * q.gamma0;
  q.n_gamma = static_cast<double>(ens.n_atoms) * q.single_atom_rate;
  q.u_single = single_atom_resonant_potential(ens.environment, ens.position, ens.dipole,
                                              ens.omega_a, potential_omega(cfg));
  if (cfg.drive) {
    q.field_amplitude = field_amplitude_from_intensity(cfg.drive->intensity);
    q.rabi = std::abs(rabi_frequency(ens, *cfg.drive));
  }
  return q;
}

std::vector<ScalingRow> run_scaling_sweep(const RunConfig& cfg, int threads) {
  const auto& counts = cfg.scaling.atom_counts;
  std::vector<ScalingRow> rows(counts.size());
  detail::parallel_for(counts.size(), threads, [&](std::size_t i) {
    const EnsembleConfig ens = cfg.ensemble(counts[i]);
    ens.validate();
    const RateLadder ladder = build_rate_ladder(ens);
    const LevelTrajectory traj =
        solve_rate_equations(ladder, resolved_t_max(cfg, ladder), cfg.solver);
    const TimeSeries intensity = emission_intensity(traj, ladder);
    ScalingRow row;
    row.n_atoms = counts[i];
    row.intensity_peak = peak(intensity);
    row.intensity_width = fwhm(intensity);
    const double u = single_atom_resonant_potential(ens.environment, ens.position, ens.dipole,
                                                    ens.omega_a, ens.omega_a);
    if (u != 0.0) {
      const TimeSeries pot = collective_potential(traj, build_potential_ladder(ens, u));
      row.potential_peak = peak(pot);
      row.potential_width = fwhm(pot);
    }
    rows[i] = row;
  });
  return rows;
}

ScalingFits fit_scaling(const std::vector<ScalingRow>& rows, int min_fit_atoms) {
  ScalingFits fits;
  fits.n_min = 0;
  fits.n_max = 0;
  for (const auto& r : rows) {
    if (r.n_atoms < min_fit_atoms) continue;
    fits.n_min = fits.n_min == 0 ? r.n_atoms : std::min(fits.n_min, r.n_atoms);
    fits.n_max = std::max(fits.n_max, r.n_atoms);
  }
  const auto fit = [&](const std::function<double(const ScalingRow&)>& y) {
    const auto pts = fit_points(rows, min_fit_atoms, y);
    return power_law_fit(pts);
  };
  fits.intensity_peak = fit([](const ScalingRow& r) { return r.intensity_peak.height; });
  fits.intensity_fwhm = fit([](const ScalingRow& r) { return r.intensity_width.width; });
  fits.intensity_t_peak = fit([](const ScalingRow& r) { return r.intensity_peak.time; });
  const bool have_potential =
      !rows.empty() && std::all_of(rows.begin(), rows.end(),
                                   [](const ScalingRow& r) { return r.potential_peak.has_value(); });
  if (have_potential) {
    fits.potential_peak = fit([](const ScalingRow& r) { return r.potential_peak->height; });
    fits.potential_fwhm = fit([](const ScalingRow& r) { return r.potential_width->width; });
    fits.potential_t_peak = fit([](const ScalingRow& r) { return r.potential_peak->time; });
  }
  return fits;
}

RunReport run_experiment(const RunConfig& cfg, const RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const auto& dir = ctx.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + dir.string() +
                             "': " + ec.message());
  }

  RunReport report;
  const DerivedQuantities q = derive_quantities(cfg);
  if (cfg.drive) {
    if (auto w = cfg.drive->validate(cfg.omega_a)) report.warnings.push_back(*w);
  }

  Manifest m;
  m.emplace_back("pdicke.version", kVersion);
  m.emplace_back("run.experiment", to_string(cfg.experiment));
  add(m, "constants.speed_of_light_m_per_s", constants::kSpeedOfLight);
  add(m, "constants.vacuum_permittivity_F_per_m", constants::kVacuumPermittivity);
  add(m, "constants.vacuum_permeability_H_per_m", constants::kVacuumPermeability);
  add(m, "constants.hbar_J_s", constants::kHbar);
  add(m, "derived.gamma0_per_s", q.gamma0);
  add(m, "derived.purcell", q.purcell);
  add(m, "derived.single_atom_rate_per_s", q.single_atom_rate);
  add(m, "derived.n_gamma_per_s", q.n_gamma);
  add(m, "derived.u_single_J", q.u_single);
  if (cfg.drive) {
    add(m, "derived.omega_laser_rad_per_s", cfg.drive->omega_laser(cfg.omega_a));
    add(m, "derived.field_amplitude_V_per_m", *q.field_amplitude);
    add(m, "derived.rabi_rad_per_s", *q.rabi);
    m.emplace_back("derived.rabi_chain",
                   "E = sqrt(2 I / (eps0 c)); Omega = |d . e_field| E / hbar");
    add(m, "derived.rabi_over_n_gamma", *q.rabi / q.n_gamma);
  }

  switch (cfg.experiment) {
    case Experiment::kEmission:
    case Experiment::kPotential: {
      const EnsembleConfig ens = cfg.ensemble();
      const RateLadder ladder = build_rate_ladder(ens);
      const LevelTrajectory traj = solve(cfg, ens, ladder);
      add(m, "derived.t_max_s", resolved_t_max(cfg, ladder));
      if (traj.driven()) add(m, "derived.validity_limit_s", traj.validity_limit);
      add(m, "derived.max_normalization_error", max_normalization_error(traj));
      if (cfg.experiment == Experiment::kEmission) {
        const TimeSeries intensity = emission_intensity(traj, ladder);
        const auto path = dir / "emission.csv";
        write_csv(series_table(intensity, traj, "intensity_per_s", "intensity_over_gamma0",
                               q.gamma0),
                  path);
        report.files.push_back(path);
        if (!traj.driven()) add(m, "derived.total_photons", total_photons(intensity));
      } else {
        const TimeSeries pot = collective_potential(traj, build_potential_ladder(ens, q.u_single));
        const auto path = dir / "potential.csv";
        write_csv(series_table(pot, traj, "potential_J", "potential_over_u_single", q.u_single),
                  path);
        report.files.push_back(path);
        if (q.u_single == 0.0) {
          report.warnings.push_back("single-atom potential is zero; potential is identically zero");
        }
      }
      break;
    }
    case Experiment::kFidelityMap: {
      const EnsembleConfig ens = cfg.ensemble();
      const FidelityMap map = fidelity_map(cfg.map.grid, ens.position, ens.dipole, ens.omega_a,
                                           ens.environment, ctx.threads);
      const CorridorMask mask = corridor_mask(map, cfg.map.corridor_lo, cfg.map.corridor_hi);
      const auto path = dir / "fidelity_map.csv";
      write_csv(fidelity_map_table(map, mask), path);
      report.files.push_back(path);
      const auto [iz, ix] = map.reference_cell();
      m.emplace_back("derived.corridor_cells", std::to_string(mask.count()));
      m.emplace_back("derived.corridor_connected", is_connected(mask) ? "true" : "false");
      add(m, "derived.reference_cell_x_m", map.xs[ix]);
      add(m, "derived.reference_cell_z_m", map.zs[iz]);
      break;
    }
    case Experiment::kScaling: {
      const auto rows = run_scaling_sweep(cfg, ctx.threads);
      CsvTable table;
      table.header = {"N",
                      "intensity_peak_per_s",
                      "intensity_fwhm_s",
                      "intensity_t_peak_s",
                      "potential_peak_J",
                      "potential_fwhm_s",
                      "potential_t_peak_s"};
      const auto opt = [](const auto& o, auto get) {
        return o ? format_scientific(get(*o)) : std::string("nan");
      };
      for (const auto& r : rows) {
        table.rows.push_back(
            {std::to_string(r.n_atoms), format_scientific(r.intensity_peak.height),
             format_scientific(r.intensity_width.width), format_scientific(r.intensity_peak.time),
             opt(r.potential_peak, [](const PeakResult& p) { return p.height; }),
             opt(r.potential_width, [](const FwhmResult& f) { return f.width; }),
             opt(r.potential_peak, [](const PeakResult& p) { return p.time; })});
      }
      const auto path = dir / "scaling.csv";
      write_csv(table, path);
      report.files.push_back(path);

      const ScalingFits fits = fit_scaling(rows, cfg.scaling.min_fit_atoms);
      CsvTable fit_table;
      fit_table.header = {"quantity", "exponent", "log_prefactor", "r_squared",
                          "points",   "n_min",    "n_max"};
      const auto push = [&](const char* name, const PowerLawFit& f) {
        fit_table.rows.push_back({name, format_scientific(f.exponent),
                                  format_scientific(f.log_prefactor),
                                  format_scientific(f.r_squared), std::to_string(f.points),
                                  std::to_string(fits.n_min), std::to_string(fits.n_max)});
      };
      push("intensity_peak", fits.intensity_peak);
      push("intensity_fwhm", fits.intensity_fwhm);
      push("intensity_t_peak", fits.intensity_t_peak);
      if (fits.potential_peak) {
        push("potential_peak", *fits.potential_peak);
        push("potential_fwhm", *fits.potential_fwhm);
        push("potential_t_peak", *fits.potential_t_peak);
      }
      const auto fit_path = dir / "scaling_fit.csv";
      write_csv(fit_table, fit_path);
      report.files.push_back(fit_path);
      break;
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.emplace_back("files", join_files(report.files));
  add(m, "wall_clock_s", wall);
  for (std::size_t i = 0; i < report.warnings.size(); ++i) {
    m.emplace_back("warning." + std::to_string(i), report.warnings[i]);
  }
  const auto manifest = dir / "manifest.txt";
  write_text_atomic(manifest, manifest_text(cfg, m));
  report.files.push_back(manifest);
  return report;
}

namespace {

struct Check {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

std::string sci(double v) { return format_scientific(v); }

}  // namespace

bool run_validation(std::ostream& out) {
  const double omega = 2.37e15;
  const double k = omega / constants::kSpeedOfLight;
  const DipoleVector dz(0.0, 0.0, 2.53e-29);
  const Position3 r0{0.0, 0.0, 1e-7};

  std::vector<Check> checks;
  checks.push_back({"coincident_free_space_green", [&] {
    const RealTensor g = im_coincident_green(Environment::kFreeSpace, r0, omega);
    const double err = (g - RealTensor::Identity() * (k / (6.0 * constants::kPi))).norm() /
                       (k / (6.0 * constants::kPi));
    return std::pair{err < 1e-12, "relative error " + sci(err)};
  }});
  checks.push_back({"mirror_reciprocity", [&] {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> xy(-5e-7, 5e-7), zz(1e-8, 5e-7);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Position3 a{xy(rng), xy(rng), zz(rng)}, b{xy(rng), xy(rng), zz(rng)};
      const DyadicTensor g12 = total_green(Environment::kPerfectMirror, a, b, omega);
      const DyadicTensor g21 = total_green(Environment::kPerfectMirror, b, a, omega);
      worst = std::max(worst, (g12 - g21.transpose()).norm() / g12.norm());
    }
    return std::pair{worst < 1e-12, "max relative asymmetry " + sci(worst)};
  }});
  checks.push_back({"purcell_limits", [&] {
    const double near_z = purcell_factor(Environment::kPerfectMirror, {0, 0, 1e-12}, dz, omega);
    const DipoleVector dx(2.53e-29, 0.0, 0.0);
    const double near_x = purcell_factor(Environment::kPerfectMirror, {0, 0, 1e-12}, dx, omega);
    const double far_z = purcell_factor(Environment::kPerfectMirror, {0, 0, 1e-2}, dz, omega);
    const bool ok = std::abs(near_z - 2.0) < 1e-4 && std::abs(near_x) < 1e-4 &&
                    std::abs(far_z - 1.0) < 1e-3;
    return std::pair{ok, "F(0+,z) = " + sci(near_z) + ", F(0+,x) = " + sci(near_x) +
                             ", F(far,z) = " + sci(far_z)};
  }});
  checks.push_back({"ladder_symmetry", [&] {
    const int n = 50;
    bool ok = true;
    for (int lvl = 1; lvl <= n; ++lvl) {
      ok = ok && transition_coefficient(n, lvl) == transition_coefficient(n, n + 1 - lvl);
    }
    return std::pair{ok, std::string("Gamma_n = Gamma_{N+1-n} for N = 50")};
  }});
  checks.push_back({"single_atom_exponential", [&] {
    EnsembleConfig ens{1, omega, dz, r0, Environment::kPerfectMirror};
    const RateLadder ladder = build_rate_ladder(ens);
    SolverOptions opts;
    opts.output_intervals = 200;
    const auto traj = solve_rate_equations(ladder, 5.0 / ladder.single_atom_rate(), opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double exact = std::exp(-ladder.single_atom_rate() * traj.times[i]);
      worst = std::max(worst, std::abs(traj.population(i, 1) - exact));
    }
    return std::pair{worst < 1e-8, "max deviation " + sci(worst)};
  }});
  checks.push_back({"normalization_and_photons", [&] {
    EnsembleConfig ens{50, omega, dz, r0, Environment::kPerfectMirror};
    const RateLadder ladder = build_rate_ladder(ens);
    SolverOptions opts;
    opts.output_intervals = 20000;
    const auto traj = solve_rate_equations(ladder, 20.0 / ladder.single_atom_rate(), opts);
    const double norm = max_normalization_error(traj);
    const double photons = total_photons(emission_intensity(traj, ladder));
    const bool ok = norm < 1e-9 && std::abs(photons - 50.0) / 50.0 < 1e-3;
    return std::pair{ok, "normalization " + sci(norm) + ", photons " + sci(photons)};
  }});
  checks.push_back({"driven_solvers_agree", [&] {
    EnsembleConfig ens{2, omega, dz, r0, Environment::kPerfectMirror};
    DriveConfig drive;
    drive.intensity = 3e4;
    SolverOptions opts;
    opts.output_intervals = 100;
    const double t_max = 2e-9;
    const auto a = solve_lindblad(ens, drive, t_max, opts);
    const auto b = solve_driven_coherences(ens, drive, t_max, opts);
    const double err = (a.populations - b.populations).cwiseAbs().maxCoeff();
    return std::pair{err < 1e-6, "max population difference " + sci(err)};
  }});
  checks.push_back({"fidelity_reference_unity", [&] {
    const DipoleVector dx(2.53e-29, 0.0, 0.0);
    const double f = fidelity(r0, r0, dx, omega, Environment::kPerfectMirror);
    return std::pair{std::abs(f - 1.0) < 1e-12, "F(r0, r0) = " + sci(f)};
  }});

  bool all = true;
  for (const auto& c : checks) {
    std::pair<bool, std::string> result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result = {false, std::string("threw: ") + e.what()};
    }
    all = all && result.first;
    out << (result.first ? "PASS " : "FAIL ") << c.name << ": " << result.second << "\n";
  }
  return all;
}

}  // namespace pdicke
