#include "pdicke/em_greens.hpp"

#include "pdicke/constants.hpp"
#include "pdicke/errors.hpp"

#include <cmath>
#include <string>

namespace pdicke {

namespace {

// Radial kernels of the free-space tensor, G = (k / 4 pi) [A(x) 1 + B(x) u u],
// x = k rho:
//   A(x) = e^{ix} (1/x + i/x^2 - 1/x^3)
//   B(x) = e^{ix} (-1/x - 3i/x^2 + 3/x^3)
// Im A = j0 - j1/x and Im B = -j0 + 3 j1/x are evaluated from their series
// below x = 0.1, where the closed forms cancel catastrophically.
struct RadialKernels {
  Complex a;
  Complex b;
};

constexpr double kSeriesThreshold = 0.1;

RadialKernels radial_kernels(double x) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double x2 = x * x;
  const double x3 = x2 * x;

  double j0 = 0.0;
  double j1_over_x = 0.0;
  if (x < kSeriesThreshold) {
    const double x4 = x2 * x2;
    const double x6 = x4 * x2;
    const double x8 = x4 * x4;
    j0 = 1.0 - x2 / 6.0 + x4 / 120.0 - x6 / 5040.0 + x8 / 362880.0;
    j1_over_x = 1.0 / 3.0 - x2 / 30.0 + x4 / 840.0 - x6 / 45360.0 + x8 / 3991680.0;
  } else {
    j0 = s / x;
    j1_over_x = s / x3 - c / x2;
  }

  const double re_a = c / x - s / x2 - c / x3;
  const double re_b = -c / x + 3.0 * s / x2 + 3.0 * c / x3;
  return {Complex(re_a, j0 - j1_over_x), Complex(re_b, -j0 + 3.0 * j1_over_x)};
}

void require_positive_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("angular frequency must be positive and finite, got " +
                      std::to_string(omega));
  }
}

DyadicTensor green_from_separation(const Eigen::Vector3d& sep, double omega) {
  const double rho = sep.norm();
  const double k = omega / constants::kSpeedOfLight;
  const RadialKernels kern = radial_kernels(k * rho);
  const Eigen::Vector3d u = sep / rho;

  DyadicTensor g = (kern.b * (u * u.transpose()).cast<Complex>()).eval();
  g.diagonal().array() += kern.a;
  return g * (k / (4.0 * constants::kPi));
}

}  // namespace

const char* to_string(Environment env) {
  switch (env) {
    case Environment::kFreeSpace:
      return "free-space";
    case Environment::kPerfectMirror:
      return "mirror";
  }
  return "unknown";
}

void require_in_domain(Environment env, const Position3& r) {
  if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z)) {
    throw DomainError("position has non-finite coordinates");
  }
  if (env == Environment::kPerfectMirror && !(r.z > 0.0)) {
    throw DomainError("position z = " + std::to_string(r.z) +
                      " m lies in or on the plate (mirror requires z > 0)");
  }
}

DyadicTensor free_space_green(const Position3& r1, const Position3& r2, double omega) {
  require_positive_frequency(omega);
  const Eigen::Vector3d sep = r1.vec() - r2.vec();
  if (sep.squaredNorm() == 0.0) {
    throw DomainError(
        "free_space_green: coincident points; the real part diverges, use "
        "im_coincident_green for the coincidence limit");
  }
  return green_from_separation(sep, omega);
}

DyadicTensor mirror_scatter_green(const Position3& r1, const Position3& r2, double omega) {
  require_positive_frequency(omega);
  require_in_domain(Environment::kPerfectMirror, r1);
  require_in_domain(Environment::kPerfectMirror, r2);

  const Position3 image{r2.x, r2.y, -r2.z};
  DyadicTensor g = green_from_separation(r1.vec() - image.vec(), omega);
  // Image dipole: tangential components flip, normal component is kept.
  g.col(0) = -g.col(0);
  g.col(1) = -g.col(1);
  return g;
}

DyadicTensor total_green(Environment env, const Position3& r1, const Position3& r2,
                         double omega) {
  require_in_domain(env, r1);
  require_in_domain(env, r2);
  DyadicTensor g = free_space_green(r1, r2, omega);
  if (env == Environment::kPerfectMirror) {
    g += mirror_scatter_green(r1, r2, omega);
  }
  return g;
}

RealTensor im_coincident_green(Environment env, const Position3& r, double omega) {
  require_positive_frequency(omega);
  require_in_domain(env, r);
  RealTensor im = RealTensor::Identity() * (omega / (6.0 * constants::kPi * constants::kSpeedOfLight));
  if (env == Environment::kPerfectMirror) {
    im += mirror_scatter_green(r, r, omega).imag();
  }
  return im;
}

RealTensor im_green(Environment env, const Position3& r1, const Position3& r2,
                    double omega) {
  if (r1 == r2) {
    return im_coincident_green(env, r1, omega);
  }
  return total_green(env, r1, r2, omega).imag();
}

Complex contract(const DipoleVector& a, const RealTensor& m, const DipoleVector& b) {
  return (a.transpose() * m.cast<Complex>() * b.conjugate()).value();
}

}  // namespace pdicke
