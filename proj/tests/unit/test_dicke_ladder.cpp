#include "oracles.hpp"
#include "pdicke/dicke_ladder.hpp"
#include "pdicke/errors.hpp"

#include <doctest.h>

#include <random>

using namespace pdicke;

namespace {

constexpr double kOmega = oracle::kOmegaRb;
const double kK = kOmega / oracle::c;
const DipoleVector kDz(0, 0, oracle::kDipoleRb);
const DipoleVector kDx(oracle::kDipoleRb, 0, 0);

EnsembleConfig ensemble(int n, Environment env = Environment::kFreeSpace, double z = 1e-7,
                        const DipoleVector& d = kDz) {
  return {n, kOmega, d, {0, 0, z}, env};
}

}  // namespace

TEST_CASE("degeneracy counts symmetric product states") {
  CHECK(degeneracy(4, 2) == 6);
  CHECK(degeneracy(50, 50) == 1);
  CHECK(degeneracy(6, 4) == 15);
  CHECK(to_string(degeneracy(100, 50)) == "100891344545564193334812497256");
  CHECK(to_string(degeneracy(120, 60)) == "96614908840363322603893139521372656");
  CHECK_THROWS_AS(degeneracy(4, 5), DomainError);
  CHECK_THROWS_AS(degeneracy(121, 3), DomainError);
}

TEST_CASE("collective dipole factor") {
  CHECK(collective_dipole_factor(2, 2) == doctest::Approx(std::sqrt(2.0)));
  for (int n : {1, 7, 50, 100}) CHECK(collective_dipole_factor(n, n) == doctest::Approx(std::sqrt(n)));
  CHECK(collective_dipole_factor(100, 50) == doctest::Approx(50.4975).epsilon(1e-6));
  CHECK_THROWS_AS(collective_dipole_factor(4, 0), DomainError);

  SUBCASE("agrees with explicit symmetrized states") {
    for (int n_atoms = 1; n_atoms <= 6; ++n_atoms) {
      for (int level = 1; level <= n_atoms; ++level) {
        CAPTURE(n_atoms);
        CAPTURE(level);
        CHECK(collective_dipole_factor(n_atoms, level) ==
              doctest::Approx(oracle::brute_force_dipole_element(n_atoms, level)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("free-space single-atom rate") {
  const double g = free_space_rate(kOmega, kDz);
  CHECK(std::abs(g - oracle::gamma0(kOmega, oracle::kDipoleRb)) <= 1e-12 * g);
  CHECK(g == doctest::Approx(3.594e7).epsilon(1e-3));
  CHECK(free_space_rate(kOmega, 2.0 * kDz) == doctest::Approx(4.0 * g).epsilon(1e-14));
  CHECK(free_space_rate(2.0 * kOmega, kDz) == doctest::Approx(8.0 * g).epsilon(1e-14));
  CHECK_THROWS_AS(free_space_rate(0.0, kDz), DomainError);
}

TEST_CASE("Purcell factor") {
  CHECK(purcell_factor(Environment::kFreeSpace, {0, 0, 1e-9}, kDz, kOmega) == 1.0);
  CHECK(purcell_factor(Environment::kFreeSpace, {0, 0, -1}, kDx, kOmega) == 1.0);

  const double fz = purcell_factor(Environment::kPerfectMirror, {0, 0, 1e-7}, kDz, kOmega);
  const double want = oracle::purcell_perpendicular(2.0 * kK * 1e-7);
  CHECK(std::abs(fz - want) <= 1e-9 * want);
  CHECK(fz == doctest::Approx(1.771).epsilon(1e-3));

  CHECK(purcell_factor(Environment::kPerfectMirror, {0, 0, 1e-3 / kK}, kDx, kOmega) ==
        doctest::Approx(0.0).epsilon(1e-3));

  SUBCASE("image-tensor path matches the closed-form series") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> kz(0.1, 30.0);
    for (int i = 0; i < 50; ++i) {
      const double z = kz(rng) / kK;
      const double x = 2.0 * kK * z;
      const double got_z = purcell_factor(Environment::kPerfectMirror, {0, 0, z}, kDz, kOmega);
      const double got_x = purcell_factor(Environment::kPerfectMirror, {0, 0, z}, kDx, kOmega);
      CHECK(std::abs(got_z - oracle::purcell_perpendicular(x)) <=
            1e-9 * oracle::purcell_perpendicular(x));
      CHECK(std::abs(got_x - oracle::purcell_parallel(x)) <= 1e-9 * oracle::purcell_parallel(x));
    }
  }
  SUBCASE("in-plate positions are rejected") {
    CHECK_THROWS_AS(purcell_factor(Environment::kPerfectMirror, {0, 0, 0}, kDz, kOmega),
                    DomainError);
  }
}

TEST_CASE("rate ladder") {
  SUBCASE("two atoms in free space decay at twice the single-atom rate on both steps") {
    const RateLadder l = build_rate_ladder(ensemble(2));
    REQUIRE(l.rates.size() == 3);
    CHECK(l.rates[0] == 0.0);
    CHECK(l.rate(1) == doctest::Approx(2.0 * l.gamma0).epsilon(1e-15));
    CHECK(l.rate(2) == doctest::Approx(2.0 * l.gamma0).epsilon(1e-15));
  }
  SUBCASE("single atom") {
    const RateLadder m = build_rate_ladder(ensemble(1, Environment::kPerfectMirror));
    CHECK(m.rate(1) == m.purcell * m.gamma0);
    const RateLadder f = build_rate_ladder(ensemble(1));
    CHECK(f.rate(1) == free_space_rate(kOmega, kDz));
  }
  SUBCASE("fifty atoms peak at 650 mid-ladder and are symmetric") {
    const RateLadder l = build_rate_ladder(ensemble(50, Environment::kPerfectMirror));
    const double unit = l.single_atom_rate();
    CHECK(l.rate(25) == 650.0 * unit);
    CHECK(l.rate(26) == 650.0 * unit);
    for (int n = 1; n <= 50; ++n) {
      CHECK(l.rate(n) <= 650.0 * unit);
      CHECK(l.rate(n) == l.rate(51 - n));
    }
  }
  SUBCASE("sum of inverse rates") {
    for (int n_atoms : {1, 2, 10, 100}) {
      const RateLadder l = build_rate_ladder(ensemble(n_atoms));
      double got = 0.0, want = 0.0;
      for (int n = 1; n <= n_atoms; ++n) {
        got += 1.0 / l.rate(n);
        want += 1.0 / (static_cast<double>(n) * (n_atoms - n + 1));
      }
      want /= l.gamma0;
      CHECK(std::isfinite(got));
      CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(build_rate_ladder(ensemble(0)), DomainError);
}

TEST_CASE("four-index rates") {
  SUBCASE("damping pair of one transition reduces to the two-index rate") {
    const EnsembleConfig cfg = ensemble(2);
    const RateLadder l = build_rate_ladder(cfg);
    const Complex pair = four_index_rate(2, 1, 1, 2, cfg) + four_index_rate(1, 2, 2, 1, cfg);
    CHECK(pair.real() == doctest::Approx(2.0 * l.gamma0).epsilon(1e-14));
    CHECK(std::abs(pair.imag()) <= 1e-14 * l.gamma0);
    CHECK(pair.real() == doctest::Approx(l.rate(2)).epsilon(1e-14));
  }
  SUBCASE("every transition of a mirror ladder") {
    const EnsembleConfig cfg = ensemble(7, Environment::kPerfectMirror);
    const FourIndexRates g(cfg);
    const RateLadder l = build_rate_ladder(cfg);
    for (int n = 1; n <= 7; ++n) {
      CHECK((g(n, n - 1, n - 1, n) + g(n - 1, n, n, n - 1)).real() ==
            doctest::Approx(l.rate(n)).epsilon(1e-13));
    }
  }
  SUBCASE("selection rule") {
    const FourIndexRates g(ensemble(4));
    CHECK(g(3, 1, 1, 2) == Complex{});
    CHECK(g(2, 2, 1, 2) == Complex{});
    CHECK(g(2, 1, 4, 1) == Complex{});
    CHECK(g(5, 4, 4, 5) == Complex{});
    CHECK(g(0, -1, -1, 0) == Complex{});
  }
}

TEST_CASE("ensemble validation") {
  CHECK_NOTHROW(ensemble(3, Environment::kPerfectMirror).validate());
  CHECK_THROWS_AS(ensemble(3, Environment::kPerfectMirror, -1e-9).validate(), DomainError);
  CHECK_THROWS_AS(ensemble(3, Environment::kFreeSpace, 0, DipoleVector::Zero()).validate(),
                  DomainError);
}
