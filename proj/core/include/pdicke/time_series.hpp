// time_series.hpp - a sampled scalar observable on a uniform time grid

#pragma once

#include "pdicke/em_greens.hpp"

#include <string>
#include <vector>

namespace pdicke {

struct SeriesMetadata {
  std::string quantity;  // e.g. "intensity" (1/s) or "potential" (J)
  int n_atoms = 0;
  double purcell = 1.0;
  double gamma0 = 0.0;
  Environment environment = Environment::kFreeSpace;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  SeriesMetadata meta;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Copy with every value multiplied by `factor`.
  TimeSeries scaled(double factor) const {
    TimeSeries out = *this;
    for (double& v : out.values) v *= factor;
    return out;
  }
};

/// Uniform grid of `intervals + 1` points spanning [0, t_max].
std::vector<double> uniform_grid(double t_max, int intervals);

}  // namespace pdicke
