#pragma once

namespace stqc {

/// Smooth bump g(s) = exp(-1 / ((s - d0)(1 - d0 - s))) supported on [d0, 1 - d0],
/// with analytic first and second derivatives.
class Bump {
 public:
  explicit Bump(double delta0 = 0.05);

  double delta0() const { return delta0_; }
  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;

 private:
  double delta0_;
};

/// I(c) = int_0^1 exp(-8 c g(s)) ds by adaptive Simpson quadrature.
double bump_exponential_integral(const Bump& g, double c, double tol = 1e-13);

/// Amplitude c <= 0 with I(c) = ratio, found by bisection to 1e-12.
/// Throws BumpRangeError when ratio < 1 or no bracket is found.
double solve_bump_amplitude(const Bump& g, double ratio);

/// Closed-form control of the exact harmonic construction on [0, T]:
///   f = c g, a(t) = f'(t/T)/T, b(t) = exp(4 f(t/T)),
///   u(t) = -a'(t) - 4 a(t)^2 + b(t)^{-4}.
struct BumpHarmonic {
  double amplitude;
  double delta0;
  double period;

  double a(double t) const;
  double b(double t) const;
  double u(double t) const;
};

}  // namespace stqc
