#include "pdicke/analysis.hpp"

#include "pdicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdicke {

PeakResult peak(const TimeSeries& series) {
  if (series.empty() || series.values.size() != series.times.size()) {
    throw DomainError("peak: series is empty or malformed");
  }
  const auto& v = series.values;
  const auto& t = series.times;
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }

  PeakResult result;
  result.index = best;
  result.time = t[best];
  result.height = std::abs(v[best]);
  if (result.height == 0.0) {
    result.degenerate = true;
    return result;
  }
  if (best == 0 || best + 1 == v.size()) {
    result.at_boundary = true;
    return result;
  }

  const double y0 = std::abs(v[best - 1]);
  const double y1 = std::abs(v[best]);
  const double y2 = std::abs(v[best + 1]);
  const double curvature = y0 - 2.0 * y1 + y2;
  if (curvature < 0.0) {
    const double offset = 0.5 * (y0 - y2) / curvature;  // in grid steps, |offset| <= 1/2
    const double step = 0.5 * (t[best + 1] - t[best - 1]);
    result.time = t[best] + offset * step;
    result.height = y1 - 0.25 * (y0 - y2) * offset;
  }
  return result;
}

FwhmResult fwhm(const TimeSeries& series) {
  if (series.size() < 3) {
    throw DomainError("fwhm: series needs at least three samples");
  }
  const PeakResult p = peak(series);
  if (p.degenerate) {
    throw NumericalError("fwhm: series is identically zero");
  }
  const auto& v = series.values;
  const auto& t = series.times;
  const double half = 0.5 * p.height;
  const auto crossing = [&](std::size_t below, std::size_t above) {
    const double a = std::abs(v[below]);
    const double b = std::abs(v[above]);
    return t[below] + (half - a) / (b - a) * (t[above] - t[below]);
  };

  FwhmResult result;
  std::size_t i = p.index;
  while (i > 0 && std::abs(v[i - 1]) >= half) --i;
  if (i == 0) {
    result.left = t.front();
    result.partial = true;
  } else {
    result.left = crossing(i - 1, i);
  }

  std::size_t j = p.index;
  while (j + 1 < v.size() && std::abs(v[j + 1]) >= half) ++j;
  if (j + 1 == v.size()) {
    throw NumericalError("fwhm: no half-maximum crossing after the peak; extend t_max",
                         t.back());
  }
  result.right = crossing(j + 1, j);
  result.width = result.right - result.left;
  const double spacing = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (result.width < 2.0 * spacing) {
    throw NumericalError("fwhm: peak spans fewer than two grid steps; refine the output grid");
  }
  return result;
}

PowerLawFit power_law_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) {
    throw DomainError("power_law_fit: need at least 4 points, got " +
                      std::to_string(points.size()));
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, value] : points) {
    if (!(n > 0.0) || !(value > 0.0)) {
      throw DomainError("power_law_fit: abscissae and values must be positive");
    }
    sx += std::log(n);
    sy += std::log(value);
  }
  const double count = static_cast<double>(points.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [n, value] : points) {
    const double dx = std::log(n) - mx;
    const double dy = std::log(value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw DomainError("power_law_fit: all abscissae are equal");
  }

  PowerLawFit fit;
  fit.points = points.size();
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (const auto& [n, value] : points) {
      const double r = std::log(value) - (fit.log_prefactor + fit.exponent * std::log(n));
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

double total_photons(const TimeSeries& series) {
  double sum = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    sum += 0.5 * (series.values[i] + series.values[i - 1]) *
           (series.times[i] - series.times[i - 1]);
  }
  return sum;
}

}  // namespace pdicke
