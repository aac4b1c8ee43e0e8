// dicke_ladder.hpp - the symmetric (N+1)-level "Dicke atom".
//
// Levels are indexed by the integer n = J + M in {0, ..., N} (J = N/2), so
// n = N is the fully inverted state and n = 0 the ground state. The
// transition n -> n-1 carries the collective factor n (N - n + 1).

#pragma once

#include "pdicke/em_greens.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pdicke {

__extension__ using BigCount = unsigned __int128;

std::string to_string(BigCount value);

struct EnsembleConfig {
  int n_atoms = 1;
  double omega_a = 0.0;  // rad/s
  DipoleVector dipole = DipoleVector::Zero();  // C m, single-atom <e|d|g>
  Position3 position;
  Environment environment = Environment::kFreeSpace;

  /// Throws DomainError on N < 1, omega_a <= 0, |d| = 0 or a position
  /// outside the environment's vacuum region.
  void validate() const;
};

/// Number of product states in the symmetric state with n excitations,
/// N! / (n! (N - n)!), in exact 128-bit arithmetic (valid through N = 120).
BigCount degeneracy(int n_atoms, int level);

/// sqrt(n (N - n + 1)): magnitude of <n|J+|n-1> in units of the single-atom
/// dipole. Requires 1 <= n <= N.
double collective_dipole_factor(int n_atoms, int level);

/// Integer coefficient n (N - n + 1) of the n -> n-1 transition.
std::int64_t transition_coefficient(int n_atoms, int level);

/// Free-space single-atom rate w^3 |d|^2 / (3 pi eps0 hbar c^3).
double free_space_rate(double omega_a, const DipoleVector& dipole);

/// 1 + (6 pi c / (w |d|^2)) d . Im G1(r, r, w) . d*. Exactly 1 in free space.
double purcell_factor(Environment env, const Position3& position, const DipoleVector& dipole,
                      double omega_a);

struct RateLadder {
  int n_atoms = 0;
  double gamma0 = 0.0;   // free-space single-atom rate, 1/s
  double purcell = 1.0;  // F_P at the ensemble position
  /// rates[n] is the n -> n-1 rate for n = 1..N; rates[0] = 0 (ground level).
  std::vector<double> rates;

  /// Single-atom rate in the environment, F_P * gamma0.
  double single_atom_rate() const { return purcell * gamma0; }
  double rate(int level) const { return rates.at(static_cast<std::size_t>(level)); }
  int levels() const { return n_atoms + 1; }
};

RateLadder build_rate_ladder(const EnsembleConfig& cfg);

/// Contractions of the single-atom dipole against Im G(r_A, r_A, w_A),
/// prefactor mu0 w^2 / hbar folded in. Four-index rates are
///   Gamma_{a,b,c,d} = f_{ab} f_{cd} * s(dir_ab, dir_cd),
/// where f is the collective dipole factor of the transition, dir tells
/// whether the left index is the upper level (matrix element d) or the lower
/// one (d*), and s is the matching contraction. With this normalization the
/// pair Gamma_{n,n-1,n-1,n} + Gamma_{n-1,n,n,n-1} equals the two-index rate.
class FourIndexRates {
 public:
  explicit FourIndexRates(const EnsembleConfig& cfg);

  /// Zero whenever |a - b| != 1 or |c - d| != 1 (dipole selection rule) or a
  /// level lies off the ladder.
  Complex operator()(int a, int b, int c, int d) const;

  int n_atoms() const { return n_atoms_; }

 private:
  int n_atoms_;
  // Indexed by [left is upper][right is upper]: true selects d, false d*.
  Complex contraction_[2][2];
};

Complex four_index_rate(int a, int b, int c, int d, const EnsembleConfig& cfg);

}  // namespace pdicke
