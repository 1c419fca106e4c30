#include "stqc/primitives.hpp"

#include <cmath>
#include <numbers>

#include "stqc/errors.hpp"
#include "stqc/fft.hpp"

namespace stqc {
namespace {

void check_localized(const WaveFunction& psi, const GuardOptions& guard, const char* where) {
  const double m = psi.boundary_mass();
  if (m > guard.boundary_mass_threshold)
    throw SupportOverflow(m, guard.boundary_mass_threshold, where);
}

}  // namespace

WaveFunction apply_quadratic_phase(const WaveFunction& psi, double a) {
  WaveFunction out(psi);
  if (a == 0.0) return out;
  const auto& g = psi.grid();
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double x = g.x(j);
    out[j] *= std::polar(1.0, a * x * x);
  }
  return out;
}

WaveFunction apply_pointwise_phase(const WaveFunction& psi, std::span<const double> phase) {
  if (phase.size() != psi.size()) throw InvalidArgument("phase array does not match grid");
  WaveFunction out(psi);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::polar(1.0, phase[j]);
  return out;
}

WaveFunction apply_plane_wave_and_translation(const WaveFunction& psi, double p, double q,
                                              double theta, const GuardOptions& guard) {
  const auto& g = psi.grid();
  if (std::abs(q) >= g.half_width()) throw InvalidArgument("translation |q| must be below L");
  WaveFunction out(psi);
  if (q != 0.0) {
    const double m = psi.boundary_mass();
    if (m > guard.boundary_mass_threshold) throw WrapAroundRisk(m, guard.boundary_mass_threshold);
    auto v = out.values();
    fft_forward(v);
    const double inv_n = 1.0 / static_cast<double>(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= std::polar(inv_n, -g.k(j) * q);
    fft_backward(v);
  }
  if (p != 0.0 || theta != 0.0) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::polar(1.0, p * g.x(j) + theta);
  }
  return out;
}

WaveFunction apply_dilation(const WaveFunction& psi, double alpha, const GuardOptions& guard) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("dilation factor must be positive");
  if (alpha == 1.0) return psi;
  check_localized(psi, guard, "dilation input");
  const auto& g = psi.grid();
  const double L = g.half_width();
  const double h = g.spacing();
  auto vals = resample_trigonometric(psi.values(), -L, h, -alpha * L, alpha * h);
  const double scale = std::sqrt(alpha);
  for (std::size_t j = 0; j < vals.size(); ++j) {
    // points mapped outside the box would pick up periodic images
    const double w = alpha * g.x(j);
    vals[j] = (w >= -L && w < L) ? vals[j] * scale : complex(0.0, 0.0);
  }
  WaveFunction out(psi.grid_ptr(), std::move(vals));
  if (alpha < 1.0) check_localized(out, guard, "dilation output");
  return out;
}

WaveFunction apply_reflection(const WaveFunction& psi) {
  const std::size_t n = psi.size();
  std::vector<complex> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = psi[(n - j) % n];
  return WaveFunction(psi.grid_ptr(), std::move(v));
}

WaveFunction apply_free_propagator(const WaveFunction& psi, double s) {
  WaveFunction out(psi);
  if (s == 0.0) return out;
  const auto k2 = psi.grid().wavenumbers_squared();
  auto v = out.values();
  fft_forward(v);
  const double inv_n = 1.0 / static_cast<double>(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= std::polar(inv_n, -s * k2[j]);
  fft_backward(v);
  return out;
}

WaveFunction apply_exp_isDelta_kernel(const WaveFunction& psi, double s, const GuardOptions& guard) {
  if (s == 0.0 || !std::isfinite(s)) throw InvalidArgument("kernel formula needs s != 0");
  const auto& g = psi.grid();
  const double L = g.half_width();
  const double h = g.spacing();
  const std::size_t n = g.size();
  if (L / (2.0 * std::abs(s)) > g.k_nyquist())
    throw ChirpAliasing("chirp |x|^2/4s exceeds the Nyquist wavenumber; s too small for grid");
  check_localized(psi, guard, "kernel input");

  // chirp
  WaveFunction chirped = apply_quadratic_phase(psi, 1.0 / (4.0 * s));
  if (double m = chirped.spectral_edge_mass(); m > guard.spectral_mass_threshold)
    throw ChirpAliasing("chirped intermediate carries spectral mass near Nyquist");

  // Fourier transform int f(y) e^{-i y xi} dy sampled on the ascending k grid
  std::vector<complex> spec(chirped.values().begin(), chirped.values().end());
  fft_forward(spec);
  std::vector<complex> ascending(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t slot = (j + n / 2) % n;
    ascending[j] = spec[slot] * std::polar(h, L * g.k(slot));
  }

  // D_{1/2s}: evaluate at xi = x / 2s, scale by |2s|^{-1/2}
  const double dk = std::numbers::pi / L;
  const double k0 = -dk * static_cast<double>(n / 2);
  auto vals = resample_trigonometric(ascending, k0, dk, -L / (2.0 * s), h / (2.0 * s));

  // chirp and constant (2 i pi sgn s)^{-1/2} |2s|^{-1/2}
  const double sign = s > 0.0 ? 1.0 : -1.0;
  const complex c = std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi * 2.0 * std::abs(s)),
                               -sign * std::numbers::pi / 4.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    vals[j] *= c * std::polar(1.0, x * x / (4.0 * s));
  }
  return WaveFunction(psi.grid_ptr(), std::move(vals));
}

}  // namespace stqc
