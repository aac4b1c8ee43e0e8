#include "oracles.hpp"
#include "pdicke/analysis.hpp"
#include "pdicke/casimir_polder.hpp"
#include "pdicke/dicke_ladder.hpp"
#include "pdicke/dynamics.hpp"

#include <doctest.h>

using namespace pdicke;

namespace {

constexpr double kOmega = oracle::kOmegaRb;
const double kK = kOmega / oracle::c;
const DipoleVector kDz(0, 0, oracle::kDipoleRb);
const DipoleVector kDx(oracle::kDipoleRb, 0, 0);

double u_mirror(double z, const DipoleVector& d) {
  return single_atom_resonant_potential(Environment::kPerfectMirror, {0, 0, z}, d, kOmega, kOmega);
}

EnsembleConfig ensemble(int n) {
  return {n, kOmega, kDz, {0, 0, 1e-7}, Environment::kPerfectMirror};
}

// Zero crossings of u(z) over kz in [lo, hi], located by bisection.
std::vector<double> zero_crossings(const DipoleVector& d, double lo, double hi) {
  std::vector<double> roots;
  const int samples = 4000;
  double prev_z = lo / kK, prev = u_mirror(prev_z, d);
  for (int i = 1; i <= samples; ++i) {
    const double z = (lo + (hi - lo) * i / samples) / kK;
    const double u = u_mirror(z, d);
    if ((u < 0) != (prev < 0)) {
      double a = prev_z, b = z;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        ((u_mirror(m, d) < 0) == (prev < 0) ? a : b) = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_z = z;
    prev = u;
  }
  return roots;
}

// Largest |u| z^p over one oscillation period centred at kz.
double envelope(const DipoleVector& d, double kz, double p) {
  double best = 0.0;
  for (int i = -200; i <= 200; ++i) {
    const double z = (kz + oracle::kPi / 2.0 * i / 200.0) / kK;
    best = std::max(best, std::abs(u_mirror(z, d)) * std::pow(z, p));
  }
  return best;
}

}  // namespace

TEST_CASE("single-atom resonant potential") {
  SUBCASE("vanishes in free space") {
    CHECK(single_atom_resonant_potential(Environment::kFreeSpace, {0, 0, 1e-7}, kDz, kOmega,
                                         kOmega) == 0.0);
  }
  SUBCASE("near field reduces to the static image-dipole energy") {
    for (double kz : {1e-3, 1e-4}) {
      const double z = kz / kK;
      const double want = oracle::image_dipole_energy(oracle::kDipoleRb, z);
      CHECK(std::abs(u_mirror(z, kDz) - want) <= 1e-5 * std::abs(want));
    }
  }
  SUBCASE("far field oscillates with period pi / k") {
    for (const DipoleVector& d : {kDx, kDz}) {
      const auto roots = zero_crossings(d, 10.0, 30.0);
      REQUIRE(roots.size() >= 10);
      const double half_period = (roots.back() - roots.front()) / static_cast<double>(roots.size() - 1);
      CHECK(2.0 * half_period == doctest::Approx(oracle::kPi / kK).epsilon(1e-2));
    }
  }
  SUBCASE("far-field envelope: 1/z tangential, 1/z^2 perpendicular") {
    CHECK(envelope(kDx, 10.0, 1.0) == doctest::Approx(envelope(kDx, 30.0, 1.0)).epsilon(0.05));
    CHECK(envelope(kDz, 10.0, 2.0) == doctest::Approx(envelope(kDz, 30.0, 2.0)).epsilon(0.05));
  }
  SUBCASE("attractive for the perpendicular dipole at 100 nm") {
    CHECK(u_mirror(1e-7, kDz) < 0.0);
  }
  SUBCASE("laser frequency enters as omega_L squared") {
    const double base = u_mirror(1e-7, kDz);
    const double shifted = single_atom_resonant_potential(Environment::kPerfectMirror, {0, 0, 1e-7},
                                                          kDz, kOmega, 2.0 * kOmega);
    CHECK(shifted == doctest::Approx(4.0 * base).epsilon(1e-14));
  }
}

TEST_CASE("potential ladder") {
  const PotentialLadder one = build_potential_ladder(ensemble(1), -1.0);
  REQUIRE(one.coefficients.size() == 2);
  CHECK(one.coefficients[1] == 1);
  const PotentialLadder fifty = build_potential_ladder(ensemble(50), -1.0);
  CHECK(fifty.coefficients[50] == 50);
  CHECK(fifty.coefficients[25] == 650);
  CHECK(fifty.coefficients[0] == 0);
  for (int n = 1; n <= 50; ++n) {
    CHECK(fifty.coefficients[static_cast<std::size_t>(n)] <= 650);
    CHECK(fifty.coefficients[static_cast<std::size_t>(n)] ==
          fifty.coefficients[static_cast<std::size_t>(51 - n)]);
  }
}

TEST_CASE("collective potential along the cascade") {
  const EnsembleConfig cfg = ensemble(50);
  const RateLadder rl = build_rate_ladder(cfg);
  const double u = u_mirror(1e-7, kDz);
  const PotentialLadder pl = build_potential_ladder(cfg, u);
  const auto traj = solve_rate_equations(rl, default_t_max(rl), SolverOptions{});
  const TimeSeries pot = collective_potential(traj, pl);

  CHECK(std::abs(pot.values.front() - 50.0 * u) <= 1e-10 * std::abs(50.0 * u));
  for (double v : pot.values) CHECK(v < 0.0);

  SUBCASE("relaxes to zero with the ground state") {
    const auto late = solve_rate_equations(rl, 40.0 / rl.single_atom_rate(), SolverOptions{});
    CHECK(std::abs(collective_potential(late, pl).values.back()) <= 1e-12 * std::abs(u));
  }

  SUBCASE("peaks together with the intensity") {
    const auto pi = peak(emission_intensity(traj, rl));
    const auto pu = peak(pot);
    CHECK(std::abs(pi.time - pu.time) <= traj.times[1]);
  }
  SUBCASE("linear in the single-atom potential") {
    const TimeSeries four = collective_potential(traj, build_potential_ladder(cfg, 4.0 * u));
    const TimeSeries three = collective_potential(traj, build_potential_ladder(cfg, 3.0 * u));
    for (std::size_t i = 0; i < pot.size(); ++i) {
      CHECK(four.values[i] == 4.0 * pot.values[i]);
      CHECK(std::abs(three.values[i] - 3.0 * pot.values[i]) <= 4e-16 * std::abs(three.values[i]));
    }
  }
}

TEST_CASE("collective potential follows superradiant scaling") {
  std::vector<double> ns, heights, widths;
  for (int n : {25, 50, 100}) {
    const EnsembleConfig cfg = ensemble(n);
    const RateLadder rl = build_rate_ladder(cfg);
    const auto traj = solve_rate_equations(rl, default_t_max(rl), SolverOptions{});
    const TimeSeries pot = collective_potential(traj, build_potential_ladder(cfg, u_mirror(1e-7, kDz)));
    ns.push_back(n);
    heights.push_back(peak(pot).height);
    widths.push_back(fwhm(pot).width);
  }
  CHECK(oracle::log_slope(ns, heights) == doctest::Approx(1.958).epsilon(0.05 / 1.958));
  CHECK(oracle::log_slope(ns, widths) == doctest::Approx(-0.999).epsilon(0.05 / 0.999));
}
