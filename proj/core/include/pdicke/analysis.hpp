// analysis.hpp - burst observables and power-law scaling fits

#pragma once

#include "pdicke/time_series.hpp"

#include <span>
#include <utility>
#include <vector>

namespace pdicke {

struct PeakResult {
  double time = 0.0;    // s
  double height = 0.0;  // peak of |values|, in series units
  std::size_t index = 0;  // grid index of the discrete maximum
  bool at_boundary = false;  // maximum sits on the first or last sample
  bool degenerate = false;   // series is identically zero
};

/// Global maximum of |values|, refined by a parabola through the three
/// samples around the discrete maximum. Throws DomainError on an empty series.
PeakResult peak(const TimeSeries& series);

struct FwhmResult {
  double width = 0.0;  // s
  double left = 0.0;   // half-maximum crossing times
  double right = 0.0;
  bool partial = false;  // left crossing precedes the first sample
};

/// Full width at half maximum of |values| with linearly interpolated
/// crossings. Throws NumericalError when the series never falls below half
/// maximum after the peak (extend t_max) or when the width is below two mean
/// grid steps (refine the grid).
FwhmResult fwhm(const TimeSeries& series);

struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least squares on (ln N, ln value). Needs >= 4 points, all positive.
PowerLawFit power_law_fit(std::span<const std::pair<double, double>> points);

/// Trapezoidal integral of the series over its grid.
double total_photons(const TimeSeries& series);

}  // namespace pdicke
