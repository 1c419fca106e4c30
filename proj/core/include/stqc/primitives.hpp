#pragma once

#include "stqc/grid.hpp"

namespace stqc {

/// Thresholds for the truncation diagnostics that guard the periodic box.
struct GuardOptions {
  /// Maximum admissible fraction of |psi|^2 beyond |x| > L/2.
  double boundary_mass_threshold = 1e-8;
  /// Maximum admissible spectral mass beyond |k| > k_nyquist / 2 for the
  /// chirped intermediate of the kernel formula.
  double spectral_mass_threshold = 1e-8;
};

/// psi -> exp(i a |x|^2) psi.
WaveFunction apply_quadratic_phase(const WaveFunction& psi, double a);

/// psi -> exp(i theta) exp(i p x) tau_q psi, with tau_q psi(x) = psi(x - q).
/// The translation is the Fourier shift multiplier exp(-i k q).
/// Throws WrapAroundRisk if the input boundary mass exceeds the threshold.
WaveFunction apply_plane_wave_and_translation(const WaveFunction& psi, double p, double q,
                                              double theta, const GuardOptions& guard = {});

/// (D_alpha psi)(x) = alpha^{1/2} psi(alpha x), alpha > 0, by trigonometric
/// resampling. Throws SupportOverflow if input or output mass reaches the box edge.
WaveFunction apply_dilation(const WaveFunction& psi, double alpha, const GuardOptions& guard = {});

/// psi(x) -> psi(-x). Exact on the symmetric grid up to the Nyquist slot.
WaveFunction apply_reflection(const WaveFunction& psi);

/// exp(i s Laplacian) as the Fourier multiplier exp(-i s k^2).
WaveFunction apply_free_propagator(const WaveFunction& psi, double s);

/// exp(i s Laplacian) through the chirp / Fourier / dilation / chirp factorization
///   (2 i pi)^{-1/2} e^{i|x|^2/4s} D_{1/2s} F e^{i|x|^2/4s},
/// with F(f)(xi) = int f(x) e^{-i x xi} dx. Throws ChirpAliasing when the chirp
/// |x|^2 / 4s is not resolved by the grid.
WaveFunction apply_exp_isDelta_kernel(const WaveFunction& psi, double s,
                                      const GuardOptions& guard = {});

/// Pointwise multiplication by exp(i phase(x)) with phase sampled on the grid.
WaveFunction apply_pointwise_phase(const WaveFunction& psi, std::span<const double> phase);

}  // namespace stqc
