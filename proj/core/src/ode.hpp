#pragma once

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <optional>

namespace stqc::detail {

/// Adaptive Dormand-Prince integration of x' = rhs(x, t) from t0 to t1.
/// `ok(x)` is checked after every accepted step; the first failing time is
/// returned (x then holds the last accepted state). dt carries the step size
/// between calls.
template <std::size_t N, class Rhs, class Ok>
std::optional<double> drive(const Rhs& rhs, std::array<double, N>& x, double t0, double t1,
                            double& dt, double tol, const Ok& ok) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  auto sys = [&](const State& s, State& ds, double t) { rhs(s, ds, t); };
  double t = t0;
  if (!(dt > 0.0)) dt = (t1 - t0) * 1e-3;
  const double min_dt = 1e-15 * std::max(1.0, std::abs(t1));
  int failures = 0;
  while (t < t1) {
    double h = std::min(dt, t1 - t);
    const bool last = (h == t1 - t);
    State trial = x;
    double tt = t;
    const auto res = stepper.try_step(sys, trial, tt, h);
    if (res == odeint::success) {
      failures = 0;
      bool finite = true;
      for (double v : trial) finite = finite && std::isfinite(v);
      if (!finite || !ok(trial)) return tt;
      x = trial;
      t = last ? t1 : tt;
      dt = h;
    } else {
      dt = h;
      if (dt < min_dt || ++failures > 200) return t;
    }
  }
  return std::nullopt;
}

}  // namespace stqc::detail
