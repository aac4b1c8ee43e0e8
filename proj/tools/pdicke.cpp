// pdicke - command-line driver for the collective-emission experiments.
//
//   pdicke <emission|potential|fidelity-map|scaling> [--config FILE] [--out DIR] [--threads N]
//   pdicke validate
//
// Exit codes: 0 success, 1 configuration error, 2 numerical or I/O failure.
// Failures print one line to stderr:
//   error kind=<config|numerical|io> [key=<key>] [line=<n>] [t=<s>] message="<text>"

#include "pdicke/config.hpp"
#include "pdicke/errors.hpp"
#include "pdicke/experiment.hpp"
#include "pdicke/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pdicke::ConfigError("", 0, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(pdicke::Experiment experiment, const std::string& config_path,
        const std::string& out_dir, int threads) {
  const std::string text = config_path.empty() ? std::string() : read_file(config_path);
  pdicke::RunConfig cfg = pdicke::parse_config(text, experiment);
  if (!out_dir.empty()) cfg.output_directory = out_dir;

  const pdicke::RunReport report =
      pdicke::run_experiment(cfg, {cfg.output_directory, threads});
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : report.files) std::cout << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective emission and Casimir-Polder dynamics of atoms near a mirror"};
  app.set_version_flag("--version", std::string(pdicke::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  struct Command {
    const char* name;
    const char* help;
    pdicke::Experiment experiment;
  };
  const Command commands[] = {
      {"emission", "Emitted intensity I(t) of the collective cascade",
       pdicke::Experiment::kEmission},
      {"potential", "Collective Casimir-Polder potential U(t)", pdicke::Experiment::kPotential},
      {"fidelity-map", "Two-point fidelity over the x-z plane", pdicke::Experiment::kFidelityMap},
      {"scaling", "Burst observables and power-law fits over N", pdicke::Experiment::kScaling},
  };
  std::vector<std::pair<CLI::App*, pdicke::Experiment>> runs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("-c,--config", config_path, "Configuration file (key = value)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "Output directory (overrides output.directory)");
    sub->add_option("-j,--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    runs.emplace_back(sub, c.experiment);
  }
  CLI::App* validate = app.add_subcommand("validate", "Run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      return pdicke::run_validation(std::cout) ? 0 : kExitFailure;
    }
    for (const auto& [sub, experiment] : runs) {
      if (sub->parsed()) return run(experiment, config_path, out_dir, threads);
    }
  } catch (const pdicke::ConfigError& e) {
    std::cerr << "error kind=config";
    if (!e.key().empty()) std::cerr << " key=" << e.key();
    if (e.line() > 0) std::cerr << " line=" << e.line();
    std::cerr << " message=" << quoted(e.message()) << "\n";
    return kExitConfig;
  } catch (const pdicke::DomainError& e) {
    std::cerr << "error kind=config message=" << quoted(e.what()) << "\n";
    return kExitConfig;
  } catch (const pdicke::NumericalError& e) {
    std::cerr << "error kind=numerical";
    if (!std::isnan(e.time())) std::cerr << " t=" << e.time();
    std::cerr << " message=" << quoted(e.what()) << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error kind=io message=" << quoted(e.what()) << "\n";
    return kExitFailure;
  }
  return 0;
}
