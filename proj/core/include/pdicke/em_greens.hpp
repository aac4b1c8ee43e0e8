// em_greens.hpp - dyadic Green's tensors for free space and a perfectly
// conducting plate.
//
// Normalization: Im G0(r, r, w) = w / (6 pi c) * 1, so that the single-atom
// rate is (2 mu0 w^2 / hbar) d . Im G . d*. The plate fills z <= 0; every
// point handed to a mirror evaluation must satisfy z > 0.

#pragma once

#include <Eigen/Core>

#include <complex>

namespace pdicke {

using Complex = std::complex<double>;
using DyadicTensor = Eigen::Matrix3cd;
using RealTensor = Eigen::Matrix3d;
using DipoleVector = Eigen::Vector3cd;

struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  friend bool operator==(const Position3&, const Position3&) = default;
};

enum class Environment { kFreeSpace, kPerfectMirror };

const char* to_string(Environment env);

/// Homogeneous-space dyadic Green's tensor between two distinct points.
/// Throws DomainError for r1 == r2; the coincidence limit of the imaginary
/// part is available from im_coincident_green, the real part diverges.
DyadicTensor free_space_green(const Position3& r1, const Position3& r2, double omega);

/// Scattered part of the perfect-mirror Green's tensor: the free-space tensor
/// from r1 to the image of r2, right-multiplied by diag(-1, -1, +1).
/// Finite at r1 == r2.
DyadicTensor mirror_scatter_green(const Position3& r1, const Position3& r2, double omega);

/// Total Green's tensor (bulk plus scattered) for r1 != r2.
DyadicTensor total_green(Environment env, const Position3& r1, const Position3& r2,
                         double omega);

/// Imaginary part of G(r, r, w): (w / 6 pi c) 1 plus, for the mirror,
/// Im G1(r, r, w).
RealTensor im_coincident_green(Environment env, const Position3& r, double omega);

/// Elementwise imaginary part of G(r1, r2, w), using the coincidence limit
/// when the two points are equal.
RealTensor im_green(Environment env, const Position3& r1, const Position3& r2,
                    double omega);

/// a . M . b* for a real symmetric tensor M.
Complex contract(const DipoleVector& a, const RealTensor& m, const DipoleVector& b);

/// Throws DomainError unless the point lies in the vacuum half-space of env.
void require_in_domain(Environment env, const Position3& r);

}  // namespace pdicke
