// experiment.hpp - orchestration of the emission, potential, fidelity-map and
// scaling pipelines, and the `validate` invariant suite.

#pragma once

#include "pdicke/analysis.hpp"
#include "pdicke/config.hpp"
#include "pdicke/csv.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pdicke {

struct RunContext {
  std::filesystem::path output_dir;
  int threads = 1;
};

/// Quantities derived from a config, echoed into the manifest.
struct DerivedQuantities {
  double gamma0 = 0.0;             // 1/s
  double purcell = 1.0;
  double single_atom_rate = 0.0;   // F_P gamma0, 1/s
  double n_gamma = 0.0;            // N F_P gamma0, 1/s
  double u_single = 0.0;           // J
  std::optional<double> field_amplitude;  // V/m
  std::optional<double> rabi;             // |Omega|, rad/s
};

DerivedQuantities derive_quantities(const RunConfig& cfg);

struct ScalingRow {
  int n_atoms = 0;
  PeakResult intensity_peak;
  FwhmResult intensity_width;
  std::optional<PeakResult> potential_peak;   // absent when u_single == 0
  std::optional<FwhmResult> potential_width;
};

struct ScalingFits {
  PowerLawFit intensity_peak;
  PowerLawFit intensity_fwhm;
  PowerLawFit intensity_t_peak;
  std::optional<PowerLawFit> potential_peak;
  std::optional<PowerLawFit> potential_fwhm;
  std::optional<PowerLawFit> potential_t_peak;
  int n_min = 0;
  int n_max = 0;
};

/// Solve the undriven cascade for every configured N (in parallel) and
/// extract burst observables. Row order follows the config.
std::vector<ScalingRow> run_scaling_sweep(const RunConfig& cfg, int threads);

/// Power-law fits over rows with N >= min_fit_atoms.
ScalingFits fit_scaling(const std::vector<ScalingRow>& rows, int min_fit_atoms);

struct RunReport {
  std::vector<std::filesystem::path> files;  // data files, then the manifest
  std::vector<std::string> warnings;
};

/// Run the configured experiment, writing data CSVs and then manifest.txt
/// into ctx.output_dir. Data files are byte-identical for identical configs.
RunReport run_experiment(const RunConfig& cfg, const RunContext& ctx);

/// Invariant suite for `pdicke validate`: one PASS/FAIL line per check.
/// Returns true when every check passes.
bool run_validation(std::ostream& out);

}  // namespace pdicke
