#include "pdicke/fidelity.hpp"

#include "pdicke/constants.hpp"
#include "pdicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace pdicke {

namespace {

std::vector<double> centered_linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("grid axis needs at least one sample");
  if (n == 1) return {0.5 * (lo + hi)};
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        center + half * (static_cast<double>(2 * i - (n - 1)) / (n - 1));
  }
  return out;
}

std::size_t nearest_index(const std::vector<double>& axis, double value) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (std::abs(axis[i] - value) < std::abs(axis[best] - value)) best = i;
  }
  return best;
}

}  // namespace

double joint_rate(const Position3& r1, const Position3& r2, const DipoleVector& dipole,
                  double omega_a, Environment env) {
  const RealTensor im_g = im_green(env, r1, r2, omega_a);
  const double prefactor =
      2.0 * constants::kVacuumPermeability * omega_a * omega_a / constants::kHbar;
  return prefactor * contract(dipole, im_g, dipole).real();
}

double fidelity(const Position3& r1, const Position3& r2, const DipoleVector& dipole,
                double omega_a, Environment env) {
  return joint_rate(r1, r2, dipole, omega_a, env) / joint_rate(r1, r1, dipole, omega_a, env);
}

std::vector<double> GridSpec::xs() const { return centered_linspace(x_min, x_max, nx); }
std::vector<double> GridSpec::zs() const { return centered_linspace(z_min, z_max, nz); }

std::pair<std::size_t, std::size_t> FidelityMap::reference_cell() const {
  return {nearest_index(zs, reference.z), nearest_index(xs, reference.x)};
}

FidelityMap fidelity_map(const GridSpec& grid, const Position3& reference,
                         const DipoleVector& dipole, double omega_a, Environment env,
                         int threads) {
  if (grid.nx < 1 || grid.nz < 1) {
    throw DomainError("fidelity_map: grid is empty");
  }
  if (env == Environment::kPerfectMirror && !(grid.z_min > 0.0)) {
    throw DomainError("fidelity_map: mirror grid must stay above the plate (z_min > 0)");
  }
  require_in_domain(env, reference);

  FidelityMap map;
  map.xs = grid.xs();
  map.zs = grid.zs();
  map.reference = reference;
  map.dipole = dipole;
  map.omega_a = omega_a;
  map.environment = env;
  map.values.assign(map.xs.size() * map.zs.size(), 0.0);

  const double gamma_ref = joint_rate(reference, reference, dipole, omega_a, env);
  const auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t iz = begin; iz < end; ++iz) {
      for (std::size_t ix = 0; ix < map.xs.size(); ++ix) {
        const Position3 probe{map.xs[ix], reference.y, map.zs[iz]};
        map.values[iz * map.xs.size() + ix] =
            joint_rate(reference, probe, dipole, omega_a, env) / gamma_ref;
      }
    }
  };

  const std::size_t rows = map.zs.size();
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, rows);
  if (workers == 1) {
    fill_rows(0, rows);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(fill_rows, rows * w / workers, rows * (w + 1) / workers);
    }
  }
  return map;
}

std::size_t CorridorMask::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

CorridorMask corridor_mask(const FidelityMap& map, double lo, double hi) {
  CorridorMask mask;
  mask.nx = map.nx();
  mask.nz = map.nz();
  mask.cells.resize(map.values.size());
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    mask.cells[i] = (map.values[i] >= lo && map.values[i] <= hi) ? 1 : 0;
  }
  return mask;
}

CorridorMask connected_component(const CorridorMask& mask, std::size_t iz, std::size_t ix) {
  CorridorMask out{mask.nx, mask.nz, std::vector<std::uint8_t>(mask.cells.size(), 0)};
  if (iz >= mask.nz || ix >= mask.nx || !mask.at(iz, ix)) return out;

  std::vector<std::pair<std::size_t, std::size_t>> stack{{iz, ix}};
  out.cells[iz * mask.nx + ix] = 1;
  while (!stack.empty()) {
    const auto [z, x] = stack.back();
    stack.pop_back();
    const auto visit = [&](std::size_t zz, std::size_t xx) {
      const std::size_t k = zz * mask.nx + xx;
      if (mask.cells[k] && !out.cells[k]) {
        out.cells[k] = 1;
        stack.emplace_back(zz, xx);
      }
    };
    if (z > 0) visit(z - 1, x);
    if (z + 1 < mask.nz) visit(z + 1, x);
    if (x > 0) visit(z, x - 1);
    if (x + 1 < mask.nx) visit(z, x + 1);
  }
  return out;
}

bool is_connected(const CorridorMask& mask) {
  const auto first = std::find(mask.cells.begin(), mask.cells.end(), std::uint8_t{1});
  if (first == mask.cells.end()) return true;
  const auto k = static_cast<std::size_t>(first - mask.cells.begin());
  return connected_component(mask, k / mask.nx, k % mask.nx).count() == mask.count();
}

RegionExtent extent(const FidelityMap& map, const CorridorMask& mask) {
  if (mask.count() == 0) throw DomainError("extent: mask is empty");
  RegionExtent e{map.xs.back(), map.xs.front(), map.zs.back(), map.zs.front()};
  for (std::size_t iz = 0; iz < mask.nz; ++iz) {
    for (std::size_t ix = 0; ix < mask.nx; ++ix) {
      if (!mask.at(iz, ix)) continue;
      e.x_min = std::min(e.x_min, map.xs[ix]);
      e.x_max = std::max(e.x_max, map.xs[ix]);
      e.z_min = std::min(e.z_min, map.zs[iz]);
      e.z_max = std::max(e.z_max, map.zs[iz]);
    }
  }
  return e;
}

}  // namespace pdicke
