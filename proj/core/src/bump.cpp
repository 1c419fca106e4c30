#include "stqc/bump.hpp"

#include <cmath>
#include <functional>

#include "stqc/errors.hpp"

namespace stqc {

Bump::Bump(double delta0) : delta0_(delta0) {
  if (!(delta0 >= 0.0 && delta0 < 0.5)) throw InvalidArgument("bump delta0 must lie in [0, 0.5)");
}

double Bump::value(double s) const {
  const double w = (s - delta0_) * (1.0 - delta0_ - s);
  if (w <= 0.0) return 0.0;
  return std::exp(-1.0 / w);
}

double Bump::d1(double s) const {
  const double w = (s - delta0_) * (1.0 - delta0_ - s);
  if (w <= 0.0) return 0.0;
  const double w1 = 1.0 - 2.0 * s;
  return std::exp(-1.0 / w) * w1 / (w * w);
}

double Bump::d2(double s) const {
  const double w = (s - delta0_) * (1.0 - delta0_ - s);
  if (w <= 0.0) return 0.0;
  const double w1 = 1.0 - 2.0 * s;
  const double w2 = -2.0;
  const double w_2 = w * w;
  const double bracket = w1 * w1 / (w_2 * w_2) + w2 / w_2 - 2.0 * w1 * w1 / (w_2 * w);
  return std::exp(-1.0 / w) * bracket;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

double bump_exponential_integral(const Bump& g, double c, double tol) {
  const double d0 = g.delta0();
  auto integrand = [&](double s) { return std::exp(-8.0 * c * g.value(s)) - 1.0; };
  // split the support so the first subdivision already resolves the peak
  double inner = 0.0;
  const int pieces = 8;
  const double width = (1.0 - 2.0 * d0) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = d0 + i * width;
    inner += adaptive_simpson(integrand, lo, lo + width, tol / pieces);
  }
  return 1.0 + inner;
}

double solve_bump_amplitude(const Bump& g, double ratio) {
  if (!(ratio >= 1.0) || !std::isfinite(ratio))
    throw BumpRangeError("bump amplitude equation needs sigma / T >= 1");
  if (ratio == 1.0) return 0.0;
  double hi = 0.0;  // I(hi) <= ratio
  double lo = -1.0;
  while (bump_exponential_integral(g, lo) < ratio) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e6) throw BumpRangeError("no bracket for the bump amplitude");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bump_exponential_integral(g, mid) < ratio)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double BumpHarmonic::a(double t) const {
  const Bump g(delta0);
  return amplitude * g.d1(t / period) / period;
}

double BumpHarmonic::b(double t) const {
  const Bump g(delta0);
  return std::exp(4.0 * amplitude * g.value(t / period));
}

double BumpHarmonic::u(double t) const {
  const Bump g(delta0);
  const double s = t / period;
  const double a = amplitude * g.d1(s) / period;
  const double adot = amplitude * g.d2(s) / (period * period);
  const double b4 = std::exp(-16.0 * amplitude * g.value(s));
  return -adot - 4.0 * a * a + b4;
}

}  // namespace stqc
