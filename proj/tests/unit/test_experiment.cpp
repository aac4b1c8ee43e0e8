#include "oracles.hpp"
#include "pdicke/config.hpp"
#include "pdicke/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pdicke;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "pdicke_test_experiment" / name;
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::map<std::string, KeyValueEntry> manifest(const fs::path& dir) {
  return parse_key_values(slurp(dir / "manifest.txt"));
}

double manifest_number(const fs::path& dir, const std::string& key) {
  return std::stod(manifest(dir).at(key).value);
}

}  // namespace

TEST_CASE("emission run") {
  const RunConfig cfg = parse_config("experiment = emission\natoms.N = 50\n");
  const auto dir = scratch("emission");
  const RunReport r = run_experiment(cfg, {dir, 2});
  REQUIRE(r.files.size() == 2);
  CHECK(r.files.back().filename() == "manifest.txt");

  const auto rows = lines(slurp(dir / "emission.csv"));
  CHECK(rows.front() == "t_s,intensity_per_s,intensity_over_gamma0");
  CHECK(rows.size() == static_cast<std::size_t>(cfg.solver.output_intervals) + 2);
  const auto first = fields(rows[1]);
  CHECK(first[0] == "0.00000000e0");
  const double purcell = oracle::purcell_perpendicular(2.0 * cfg.omega_a / oracle::c * 1e-7);
  CHECK(std::stod(first[2]) == doctest::Approx(50.0 * purcell).epsilon(1e-8));

  SUBCASE("manifest values match an independent recomputation") {
    const double g0 = oracle::gamma0(cfg.omega_a, cfg.dipole_magnitude);
    CHECK(std::abs(manifest_number(dir, "derived.gamma0_per_s") - g0) <= 1e-12 * g0);
    CHECK(std::abs(manifest_number(dir, "derived.purcell") - purcell) <= 1e-12 * purcell);
    const auto m = manifest(dir);
    CHECK(m.at("run.experiment").value == "emission");
    CHECK(m.at("atoms.N").value == "50");
    CHECK(m.count("pdicke.version") == 1);
  }
}

TEST_CASE("driven runs record the Rabi chain and a validity column") {
  const RunConfig cfg = parse_config(
      "experiment = potential\natoms.N = 10\ndrive.intensity = 30000 W/m^2\n"
      "drive.detuning = 2*pi*1e8 rad/s\nsolver.output_intervals = 100\n");
  const auto dir = scratch("driven");
  run_experiment(cfg, {dir, 1});
  const auto rows = lines(slurp(dir / "potential.csv"));
  CHECK(rows.front() == "t_s,potential_J,potential_over_u_single,valid");
  CHECK(fields(rows[1])[3] == "1");
  CHECK(fields(rows.back())[3] == "0");

  const double e = std::sqrt(2.0 * 30000.0 / (oracle::eps0 * oracle::c));
  const double omega = cfg.dipole_magnitude * e / oracle::hbar;
  CHECK(std::abs(manifest_number(dir, "derived.field_amplitude_V_per_m") - e) <= 1e-12 * e);
  CHECK(std::abs(manifest_number(dir, "derived.rabi_rad_per_s") - omega) <= 1e-12 * omega);
  CHECK(manifest(dir).at("derived.rabi_chain").value.find("sqrt(2 I / (eps0 c))") != std::string::npos);
}

TEST_CASE("fidelity-map run shape") {
  const RunConfig cfg = parse_config("", Experiment::kFidelityMap);
  const auto dir = scratch("map");
  run_experiment(cfg, {dir, 4});
  const auto rows = lines(slurp(dir / "fidelity_map.csv"));
  CHECK(rows.front() == "x_m,z_m,F,in_corridor");
  CHECK(rows.size() == 101 * 101 + 1);
  CHECK(manifest(dir).at("derived.corridor_connected").value == "true");
}

TEST_CASE("scaling run reproduces the superradiant exponents") {
  const RunConfig cfg = parse_config("", Experiment::kScaling);
  const auto dir = scratch("scaling");
  run_experiment(cfg, {dir, 4});
  const auto rows = lines(slurp(dir / "scaling.csv"));
  CHECK(rows.size() == 11);
  std::map<std::string, double> exponent;
  for (const auto& l : lines(slurp(dir / "scaling_fit.csv"))) {
    const auto f = fields(l);
    if (f[0] != "quantity") exponent[f[0]] = std::stod(f[1]);
  }
  CHECK(std::abs(exponent.at("intensity_peak") - 1.98) <= 0.05);
  CHECK(std::abs(exponent.at("intensity_fwhm") + 1.00) <= 0.05);
  CHECK(std::abs(exponent.at("potential_peak") - 1.96) <= 0.05);
  CHECK(std::abs(exponent.at("potential_fwhm") + 1.00) <= 0.05);
}

TEST_CASE("free-space potential runs warn and write nan ratios") {
  const RunConfig cfg = parse_config("experiment = potential\nenvironment = free-space\natoms.N = 4\n");
  const auto dir = scratch("free_potential");
  const RunReport r = run_experiment(cfg, {dir, 1});
  CHECK(r.warnings.size() == 1);
  CHECK(fields(lines(slurp(dir / "potential.csv"))[1])[2] == "nan");
}

TEST_CASE("identical configs give byte-identical data files") {
  for (const char* text :
       {"experiment = emission\natoms.N = 30\n", "experiment = potential\natoms.N = 30\n",
        "experiment = emission\natoms.N = 4\ndrive.intensity = 30000\n",
        "experiment = fidelity-map\nmap.nx = 41\nmap.nz = 41\n",
        "experiment = scaling\nscaling.atoms = 10, 20, 30, 40\n"}) {
    const RunConfig cfg = parse_config(text);
    const auto a = scratch("det_a"), b = scratch("det_b");
    const RunReport ra = run_experiment(cfg, {a, 1});
    const RunReport rb = run_experiment(cfg, {b, 3});
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i + 1 < ra.files.size(); ++i) {
      CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
    }
  }
}

TEST_CASE("validation suite passes") {
  std::ostringstream out;
  CHECK(run_validation(out));
  CHECK(out.str().find("FAIL") == std::string::npos);
}
