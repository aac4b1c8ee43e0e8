#include "pdicke/dicke_ladder.hpp"

#include "pdicke/constants.hpp"
#include "pdicke/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pdicke {

namespace {

void require_level(int n_atoms, int level, int lowest) {
  if (n_atoms < 1) {
    throw DomainError("atom count must be >= 1, got " + std::to_string(n_atoms));
  }
  if (level < lowest || level > n_atoms) {
    throw DomainError("level index " + std::to_string(level) + " outside [" +
                      std::to_string(lowest) + ", " + std::to_string(n_atoms) + "]");
  }
}

}  // namespace

std::string to_string(BigCount value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

void EnsembleConfig::validate() const {
  if (n_atoms < 1) {
    throw DomainError("atom count must be >= 1, got " + std::to_string(n_atoms));
  }
  if (!(omega_a > 0.0) || !std::isfinite(omega_a)) {
    throw DomainError("transition frequency must be positive");
  }
  if (!(dipole.norm() > 0.0) || !dipole.allFinite()) {
    throw DomainError("dipole moment must be nonzero and finite");
  }
  require_in_domain(environment, position);
}

BigCount degeneracy(int n_atoms, int level) {
  require_level(n_atoms, level, 0);
  if (n_atoms > 120) {
    throw DomainError("degeneracy: N > 120 overflows 128-bit arithmetic");
  }
  const int k = std::min(level, n_atoms - level);
  BigCount result = 1;
  for (int i = 0; i < k; ++i) {
    // Exact at every step: result holds C(N, i) before the update.
    result = result * static_cast<BigCount>(n_atoms - i) / static_cast<BigCount>(i + 1);
  }
  return result;
}

std::int64_t transition_coefficient(int n_atoms, int level) {
  require_level(n_atoms, level, 1);
  return static_cast<std::int64_t>(level) * (n_atoms - level + 1);
}

double collective_dipole_factor(int n_atoms, int level) {
  return std::sqrt(static_cast<double>(transition_coefficient(n_atoms, level)));
}

double free_space_rate(double omega_a, const DipoleVector& dipole) {
  using namespace constants;
  if (!(omega_a > 0.0)) {
    throw DomainError("free_space_rate: transition frequency must be positive");
  }
  const double d2 = dipole.squaredNorm();
  return omega_a * omega_a * omega_a * d2 /
         (3.0 * kPi * kVacuumPermittivity * kHbar * kSpeedOfLight * kSpeedOfLight *
          kSpeedOfLight);
}

double purcell_factor(Environment env, const Position3& position, const DipoleVector& dipole,
                      double omega_a) {
  require_in_domain(env, position);
  if (env == Environment::kFreeSpace) {
    return 1.0;
  }
  const double d2 = dipole.squaredNorm();
  if (!(d2 > 0.0)) {
    throw DomainError("purcell_factor: dipole moment must be nonzero");
  }
  const RealTensor im_scattered = mirror_scatter_green(position, position, omega_a).imag();
  const double k = omega_a / constants::kSpeedOfLight;
  return 1.0 + (6.0 * constants::kPi / (k * d2)) * contract(dipole, im_scattered, dipole).real();
}

RateLadder build_rate_ladder(const EnsembleConfig& cfg) {
  cfg.validate();
  RateLadder ladder;
  ladder.n_atoms = cfg.n_atoms;
  ladder.gamma0 = free_space_rate(cfg.omega_a, cfg.dipole);
  ladder.purcell = purcell_factor(cfg.environment, cfg.position, cfg.dipole, cfg.omega_a);
  ladder.rates.assign(static_cast<std::size_t>(cfg.n_atoms) + 1, 0.0);
  for (int n = 1; n <= cfg.n_atoms; ++n) {
    const auto coefficient = static_cast<double>(transition_coefficient(cfg.n_atoms, n));
    ladder.rates[static_cast<std::size_t>(n)] = coefficient * ladder.purcell * ladder.gamma0;
  }
  return ladder;
}

FourIndexRates::FourIndexRates(const EnsembleConfig& cfg) : n_atoms_(cfg.n_atoms) {
  cfg.validate();
  const RealTensor im_g = im_coincident_green(cfg.environment, cfg.position, cfg.omega_a);
  const double prefactor =
      constants::kVacuumPermeability * cfg.omega_a * cfg.omega_a / constants::kHbar;
  const DipoleVector d = cfg.dipole;
  const DipoleVector d_conj = cfg.dipole.conjugate();
  // contract(a, M, b) = a . M . b*, so passing d_conj as b yields a . M . d.
  contraction_[1][0] = prefactor * contract(d, im_g, d);            // d  . M . d*
  contraction_[0][1] = prefactor * contract(d_conj, im_g, d_conj);  // d* . M . d
  contraction_[1][1] = prefactor * contract(d, im_g, d_conj);       // d  . M . d
  contraction_[0][0] = prefactor * contract(d_conj, im_g, d);       // d* . M . d*
}

Complex FourIndexRates::operator()(int a, int b, int c, int d) const {
  const auto on_ladder = [this](int n) { return n >= 0 && n <= n_atoms_; };
  if (!on_ladder(a) || !on_ladder(b) || !on_ladder(c) || !on_ladder(d)) return 0.0;
  if (std::abs(a - b) != 1 || std::abs(c - d) != 1) return 0.0;
  const double f_ab = collective_dipole_factor(n_atoms_, std::max(a, b));
  const double f_cd = collective_dipole_factor(n_atoms_, std::max(c, d));
  return f_ab * f_cd * contraction_[a > b ? 1 : 0][c > d ? 1 : 0];
}

Complex four_index_rate(int a, int b, int c, int d, const EnsembleConfig& cfg) {
  return FourIndexRates(cfg)(a, b, c, d);
}

}  // namespace pdicke
