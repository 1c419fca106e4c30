#include "stqc/gaussian.hpp"

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "ode.hpp"
#include "stqc/abz.hpp"
#include "stqc/errors.hpp"

namespace stqc {

using std::numbers::pi;

void GaussianState::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("Gaussian width a must be > 0");
  if (!std::isfinite(theta) || !std::isfinite(b) || !std::isfinite(p) || !std::isfinite(q))
    throw InvalidArgument("Gaussian parameters must be finite");
}

nlohmann::json GaussianState::to_json() const {
  return nlohmann::json{{"theta", theta}, {"a", a},   {"b", b},
                        {"p", std::vector<double>{p}}, {"q", std::vector<double>{q}}};
}

GaussianState GaussianState::from_json(const nlohmann::json& j) {
  try {
    GaussianState g;
    g.theta = j.value("theta", 0.0);
    g.a = j.at("a").get<double>();
    g.b = j.value("b", 0.0);
    auto scalar = [&](const char* key) {
      if (!j.contains(key)) return 0.0;
      const auto& v = j.at(key);
      if (v.is_array()) {
        if (v.size() != 1) throw ConfigError(std::string(key) + " must have d = 1 entries");
        return v[0].get<double>();
      }
      return v.get<double>();
    };
    g.p = scalar("p");
    g.q = scalar("q");
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid Gaussian JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

double gaussian_norm_constant(double a) { return std::pow(2.0 * a / pi, 0.25); }

double gaussian_normalization_self_check() {
  double worst = 0.0;
  for (double a : {0.1, 0.5, 1.0, 4.0}) {
    const double half = 12.0 / std::sqrt(a);
    const int n = 4000;
    const double h = 2.0 * half / n;
    const double c = gaussian_norm_constant(a);
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = -half + i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double v = c * std::exp(-a * x * x);
      s += w * v * v;
    }
    worst = std::max(worst, std::abs(s * h / 3.0 - 1.0));
  }
  return worst;
}

GaussianParams GaussianParams::from_state(const GaussianState& g) {
  g.validate();
  GaussianParams out;
  out.A = {g.a, g.b};
  out.q = g.q;
  out.p = g.p;
  out.gamma = {g.theta + g.p * g.q, -std::log(gaussian_norm_constant(g.a))};
  return out;
}

GaussianState GaussianParams::to_state() const {
  GaussianState s;
  s.a = A.real();
  s.b = A.imag();
  s.p = p;
  s.q = q;
  double th = std::fmod(gamma.real() - p * q, 2.0 * pi);
  if (th < 0.0) th += 2.0 * pi;
  s.theta = th;
  return s;
}

complex GaussianParams::eval(double x) const {
  const double y = x - q;
  return std::exp(-A * y * y + complex(0.0, p * y) + complex(0.0, 1.0) * gamma);
}

double GaussianParams::norm() const {
  return std::exp(-gamma.imag()) * std::pow(pi / (2.0 * A.real()), 0.25);
}

WaveFunction sample_gaussian(const GridPtr& grid, const GaussianState& g) {
  return sample_gaussian(grid, GaussianParams::from_state(g));
}

WaveFunction sample_gaussian(const GridPtr& grid, const GaussianParams& g) {
  return WaveFunction::sample(grid, [&](double x) { return g.eval(x); });
}

GaussianParams gauss_quad_phase(const GaussianParams& g, double alpha) {
  GaussianParams o = g;
  o.A -= complex(0.0, alpha);
  o.p += 2.0 * alpha * g.q;
  o.gamma += alpha * g.q * g.q;
  return o;
}

GaussianParams gauss_dilate(const GaussianParams& g, double beta) {
  if (beta == 0.0 || !std::isfinite(beta)) throw InvalidArgument("dilation needs beta != 0");
  const double m = std::abs(beta);
  GaussianParams o = g;
  o.A = g.A * m * m;
  o.q = g.q / m;
  o.p = g.p * m;
  o.gamma -= complex(0.0, 0.5 * std::log(m));
  if (beta < 0.0) {
    o.q = -o.q;
    o.p = -o.p;
  }
  return o;
}

GaussianParams gauss_translate(const GaussianParams& g, double q) {
  GaussianParams o = g;
  o.q += q;
  return o;
}

GaussianParams gauss_plane_wave(const GaussianParams& g, double p) {
  GaussianParams o = g;
  o.p += p;
  o.gamma += p * g.q;
  return o;
}

GaussianParams gauss_global_phase(const GaussianParams& g, double theta) {
  GaussianParams o = g;
  o.gamma += theta;
  return o;
}

GaussianParams gauss_free(const GaussianParams& g, double s) {
  if (s == 0.0) return g;
  const complex I(0.0, 1.0);
  const complex d = 1.0 + 4.0 * I * g.A * s;
  GaussianParams o = g;
  o.A = g.A / d;
  o.q = g.q + 2.0 * g.p * s;
  o.gamma += g.p * g.p * s + 0.5 * I * std::log(d);
  return o;
}

GaussianParams gauss_harmonic(const GaussianParams& g, double zeta) {
  if (zeta == 0.0) return g;
  const complex I(0.0, 1.0);
  const double c = std::cos(2.0 * zeta);
  const double s = std::sin(2.0 * zeta);
  const complex D = c + 2.0 * I * g.A * s;

  // continuous branch of log D along [0, zeta]
  const double m = std::floor(2.0 * zeta / pi);
  const double reduced = zeta - m * pi / 2.0;
  const complex Dr = std::cos(2.0 * reduced) + 2.0 * I * g.A * std::sin(2.0 * reduced);
  const double arg = m * pi + std::arg(Dr);
  const complex logD(std::log(std::abs(D)), arg);

  const double c4 = std::cos(4.0 * zeta);
  const double s4 = std::sin(4.0 * zeta);
  const double action = (g.p * g.p - g.q * g.q) * s4 / 4.0 + g.p * g.q * (c4 - 1.0) / 2.0;

  GaussianParams o = g;
  o.A = 0.5 * (2.0 * g.A * c + I * s) / D;
  o.q = g.q * c + g.p * s;
  o.p = g.p * c - g.q * s;
  o.gamma += action + 0.5 * I * logD;
  return o;
}

namespace {

GaussianParams evolve_split(const GaussianParams& g0, const ControlSignal& u0,
                            const ControlSignal& u, double T, const EvolveOptions& opt,
                            int depth) {
  if (T == 0.0) return g0;
  AbzOptions ao;
  ao.tol = opt.tol;
  ao.variant = AbzVariant::Harmonic;
  const auto abz = solve_abz(u0, T, ao);
  if (abz.blow_up_time) {
    if (depth >= opt.max_splits) throw BlowUp(*abz.blow_up_time);
    const double mid = 0.5 * T;
    auto g_mid = evolve_split(g0, u0.slice(0.0, mid), u.slice(0.0, mid), mid, opt, depth + 1);
    return evolve_split(g_mid, u0.slice(mid, T), u.slice(mid, T), T - mid, opt, depth + 1);
  }
  const auto cls = solve_classical(u0, u, T, opt.tol);
  // xi(T) = e^{i a x^2} D_{1/b} e^{i zeta (Lap - x^2)} g0
  auto xi = gauss_harmonic(g0, abz.zeta.back());
  xi = gauss_dilate(xi, 1.0 / abz.b.back());
  xi = gauss_quad_phase(xi, abz.a.back());
  // psi(T) = e^{i (p x / 2 + theta)} tau_q xi
  auto out = gauss_translate(xi, cls.q.back());
  out = gauss_plane_wave(out, 0.5 * cls.p.back());
  return gauss_global_phase(out, cls.theta.back());
}

}  // namespace

GaussianParams evolve_gaussian(const GaussianParams& g0, const ControlSignal& u0,
                               const ControlSignal& u, double T, const EvolveOptions& opt) {
  if (!(T >= 0.0)) throw InvalidArgument("evolve_gaussian needs T >= 0");
  return evolve_split(g0, u0, u, T, opt, 0);
}

GaussianState evolve_gaussian(const GaussianState& g0, const ControlSignal& u0,
                              const ControlSignal& u, double T, const EvolveOptions& opt) {
  return evolve_gaussian(GaussianParams::from_state(g0), u0, u, T, opt).to_state();
}

GaussianParams evolve_gaussian_direct(const GaussianParams& g0, const ControlSignal& u0,
                                      const ControlSignal& u, double T, double tol) {
  std::vector<double> stops = u0.breakpoints();
  for (double t : u.breakpoints()) stops.push_back(t);
  stops.push_back(T);
  std::sort(stops.begin(), stops.end());
  std::array<double, 6> x{g0.A.real(), g0.A.imag(), g0.q, g0.p, g0.gamma.real(), g0.gamma.imag()};
  double t = 0.0;
  double dt = 0.0;
  for (double stop : stops) {
    if (stop <= t || stop > T) continue;
    const double anchor = 0.5 * (t + stop);
    auto rhs = [&](const std::array<double, 6>& s, std::array<double, 6>& ds, double tt) {
      const double c0 = u0.value_in_piece(tt, anchor);
      const double c = u.value_in_piece(tt, anchor);
      const complex A(s[0], s[1]);
      const complex dA = complex(0.0, 1.0) * (c0 - 4.0 * A * A);
      const double q = s[2];
      const double p = s[3];
      const complex dg = p * p - 2.0 * A - c0 * q * q - c * q;
      ds = {dA.real(), dA.imag(), 2.0 * p, -2.0 * c0 * q - c, dg.real(), dg.imag()};
    };
    auto ok = [](const std::array<double, 6>& s) { return s[0] > 0.0; };
    if (auto esc = detail::drive<6>(rhs, x, t, stop, dt, tol, ok)) throw BlowUp(*esc);
    t = stop;
  }
  GaussianParams o;
  o.A = {x[0], x[1]};
  o.q = x[2];
  o.p = x[3];
  o.gamma = {x[4], x[5]};
  return o;
}

}  // namespace stqc
