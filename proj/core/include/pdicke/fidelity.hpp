// fidelity.hpp - two-atom joint decay rate and the superradiance fidelity
// F = Gamma12 / Gamma, the check on the long-wavelength (Dicke) assumption.
//
// Gamma is the single-atom rate of the reference atom r1 in the same
// environment, so F(r1, r1) = 1 in every geometry.

#pragma once

#include "pdicke/em_greens.hpp"

#include <cstdint>
#include <vector>

namespace pdicke {

/// (2 mu0 w^2 / hbar) Re[d . Im G(r1, r2, w) . d*] with the total Green's
/// tensor (bulk plus image). Equals the local single-atom rate at r1 == r2.
double joint_rate(const Position3& r1, const Position3& r2, const DipoleVector& dipole,
                  double omega_a, Environment env);

double fidelity(const Position3& r1, const Position3& r2, const DipoleVector& dipole,
                double omega_a, Environment env);

/// Rectangular grid in the x-z plane (y = 0). Samples are symmetric about the
/// interval midpoints, so x_i = -x_{n-1-i} exactly for a centered range.
struct GridSpec {
  double x_min = -4e-7;
  double x_max = 4e-7;
  int nx = 101;
  double z_min = 4e-7 / 101.0;  // one cell above the surface
  double z_max = 4e-7;
  int nz = 101;

  std::vector<double> xs() const;
  std::vector<double> zs() const;
};

struct FidelityMap {
  std::vector<double> xs;
  std::vector<double> zs;
  std::vector<double> values;  // row-major: values[iz * nx + ix]
  Position3 reference;
  DipoleVector dipole = DipoleVector::Zero();
  double omega_a = 0.0;
  Environment environment = Environment::kFreeSpace;

  std::size_t nx() const { return xs.size(); }
  std::size_t nz() const { return zs.size(); }
  double at(std::size_t iz, std::size_t ix) const { return values[iz * nx() + ix]; }
  /// Grid cell nearest to the reference atom, as (iz, ix).
  std::pair<std::size_t, std::size_t> reference_cell() const;
};

/// Evaluate F over the grid with the given reference atom; cells are spread
/// across `threads` workers. Throws DomainError for an empty grid or, for the
/// mirror, a grid reaching z <= 0.
FidelityMap fidelity_map(const GridSpec& grid, const Position3& reference,
                         const DipoleVector& dipole, double omega_a, Environment env,
                         int threads = 1);

struct CorridorMask {
  std::size_t nx = 0;
  std::size_t nz = 0;
  std::vector<std::uint8_t> cells;  // row-major like FidelityMap::values

  bool at(std::size_t iz, std::size_t ix) const { return cells[iz * nx + ix] != 0; }
  std::size_t count() const;
};

/// Cellwise lo <= F <= hi.
CorridorMask corridor_mask(const FidelityMap& map, double lo = 0.95, double hi = 1.05);

/// 4-neighbour flood fill from (iz, ix); empty mask if the seed is unset.
CorridorMask connected_component(const CorridorMask& mask, std::size_t iz, std::size_t ix);

/// True when every set cell belongs to a single 4-connected region.
bool is_connected(const CorridorMask& mask);

struct RegionExtent {
  double x_min = 0.0;
  double x_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return z_max - z_min; }
};

/// Bounding box of the set cells, in meters. Throws on an empty mask.
RegionExtent extent(const FidelityMap& map, const CorridorMask& mask);

}  // namespace pdicke
