// ode.hpp - explicit adaptive Dormand-Prince 5(4) integrator with the
// fourth-order continuous extension, reporting onto caller-supplied times.
//
// State vectors are Eigen column vectors of real or complex scalars. The error
// norm is the RMS of |err_i| / (atol + rtol * max(|y_i|, |y1_i|)).

#pragma once

#include "pdicke/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

namespace pdicke::ode {

struct Tolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
  long max_steps = 5'000'000;
  double max_step = std::numeric_limits<double>::infinity();
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

namespace detail {

// Dormand & Prince (1980) tableau.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, "Solving ODEs I", CONTD5).
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

template <typename Vec>
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const Tolerances& tol) {
  const auto n = err.size();
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale =
        tol.atol + tol.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double ratio = std::abs(err[i]) / scale;
    acc += ratio * ratio;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace detail

/// Integrate y' = rhs(t, y, dydt) from t0 with y(t0) = y0, calling
/// observer(i, t_i, y(t_i)) for every entry of `times` (sorted, all >= t0).
/// Throws NumericalError on step-size underflow, non-finite states, or when
/// `max_steps` is exhausted.
template <typename Vec, typename Rhs, typename Observer>
Stats integrate(Rhs&& rhs, double t0, Vec y, std::span<const double> times,
                const Tolerances& tol, Observer&& observer) {
  using namespace detail;
  Stats stats;
  if (times.empty()) return stats;
  if (!(tol.rtol > 0.0) || !(tol.atol > 0.0)) {
    throw NumericalError("ode: tolerances must be positive");
  }
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < t0) {
    throw NumericalError("ode: output times must be sorted and not precede t0");
  }

  std::size_t next_out = 0;
  while (next_out < times.size() && times[next_out] == t0) {
    observer(next_out, t0, y);
    ++next_out;
  }
  const double t_end = times.back();
  if (next_out == times.size()) return stats;

  const auto n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y1(n), tmp(n), err(n);
  Vec r1(n), r2(n), r3(n), r4(n), r5(n);

  double t = t0;
  rhs(t, y, k1);
  ++stats.rhs_evaluations;

  // Initial step guess (Hairer's HINIT, order 5).
  double h = 0.0;
  {
    const double span = t_end - t0;
    double dnf = 0.0, dny = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sk = tol.atol + tol.rtol * std::abs(y[i]);
      dnf += std::pow(std::abs(k1[i]) / sk, 2);
      dny += std::pow(std::abs(y[i]) / sk, 2);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * span : 0.01 * std::sqrt(dny / dnf);
    h = std::min({h, span, tol.max_step});
    tmp = y + h * k1;
    rhs(t + h, tmp, k2);
    ++stats.rhs_evaluations;
    double der2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sk = tol.atol + tol.rtol * std::abs(y[i]);
      der2 += std::pow(std::abs(k2[i] - k1[i]) / sk, 2);
    }
    der2 = std::sqrt(der2 / static_cast<double>(std::max<Eigen::Index>(n, 1))) / h;
    const double der12 =
        std::max(std::abs(der2), std::sqrt(dnf / static_cast<double>(std::max<Eigen::Index>(n, 1))));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6 * span, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 1.0 / 5.0);
    h = std::min({100.0 * h, h1, span, tol.max_step});
  }

  bool last_rejected = false;
  while (next_out < times.size()) {
    if (stats.accepted + stats.rejected >= tol.max_steps) {
      throw NumericalError("ode: maximum step count " + std::to_string(tol.max_steps) +
                               " exhausted at t = " + std::to_string(t),
                           t);
    }
    h = std::min(h, t_end - t);
    if (h <= 1e-14 * std::max(std::abs(t), std::abs(t_end))) {
      throw NumericalError("ode: step size underflow at t = " + std::to_string(t), t);
    }

    tmp = y + h * (a21 * k1);
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs(t + h, y1, k7);
    stats.rhs_evaluations += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err_norm = error_norm(err, y, y1, tol);
    if (!std::isfinite(err_norm)) {
      throw NumericalError("ode: non-finite state at t = " + std::to_string(t), t);
    }

    if (err_norm <= 1.0) {
      ++stats.accepted;
      const double t_new = (t_end - (t + h) <= 1e-13 * std::abs(t_end)) ? t_end : t + h;

      // Dense output coefficients for [t, t_new].
      r1 = y;
      r2 = y1 - y;
      r3 = h * k1 - r2;
      r4 = r2 - h * k7 - r3;
      r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next_out < times.size() && times[next_out] <= t_new) {
        const double tq = times[next_out];
        if (tq == t_new) {
          observer(next_out, tq, y1);
        } else {
          const double theta = (tq - t) / h;
          const double theta1 = 1.0 - theta;
          tmp = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
          observer(next_out, tq, tmp);
        }
        ++next_out;
      }

      y.swap(y1);
      k1.swap(k7);
      t = t_new;

      double factor = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);
      factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 10.0);
      h = std::min(h * factor, tol.max_step);
      last_rejected = false;
    } else {
      ++stats.rejected;
      const double factor = std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      h *= factor;
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace pdicke::ode
