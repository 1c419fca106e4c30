#pragma once

#include <json.hpp>

#include "stqc/control.hpp"
#include "stqc/grid.hpp"

namespace stqc {

/// x -> e^{i theta} N(a) e^{i p x} e^{-(a + i b)(x - q)^2}, N(a) = (2a/pi)^{1/4}.
struct GaussianState {
  double theta = 0.0;
  double a = 0.5;
  double b = 0.0;
  double p = 0.0;
  double q = 0.0;

  /// Throws InvalidArgument unless a > 0 and all fields are finite.
  void validate() const;
  nlohmann::json to_json() const;
  static GaussianState from_json(const nlohmann::json& j);
};

/// Unit-norm constant (2a/pi)^{1/4} in d = 1.
double gaussian_norm_constant(double a);

/// Largest deviation from 1 of the quadrature norm of N(a) e^{-a x^2} over a
/// panel of widths; a startup self-check of the normalization constant.
double gaussian_normalization_self_check();

/// Canonical parameters: psi(x) = exp(-A (x - q)^2 + i p (x - q) + i gamma),
/// Re A > 0, gamma complex (its imaginary part carries the amplitude).
struct GaussianParams {
  complex A{0.5, 0.0};
  double q = 0.0;
  double p = 0.0;
  complex gamma{0.0, 0.0};

  static GaussianParams from_state(const GaussianState& g);
  /// Drops the amplitude; theta reduced to [0, 2 pi).
  GaussianState to_state() const;
  complex eval(double x) const;
  double norm() const;
};

WaveFunction sample_gaussian(const GridPtr& grid, const GaussianState& g);
WaveFunction sample_gaussian(const GridPtr& grid, const GaussianParams& g);

/// Exact actions of the primitive factors on a Gaussian.
GaussianParams gauss_quad_phase(const GaussianParams& g, double alpha);
/// D_beta for beta != 0 (negative beta composes the reflection x -> -x).
GaussianParams gauss_dilate(const GaussianParams& g, double beta);
GaussianParams gauss_translate(const GaussianParams& g, double q);
GaussianParams gauss_plane_wave(const GaussianParams& g, double p);
GaussianParams gauss_global_phase(const GaussianParams& g, double theta);
/// e^{i s Lap}.
GaussianParams gauss_free(const GaussianParams& g, double s);
/// e^{i zeta (Lap - x^2)}.
GaussianParams gauss_harmonic(const GaussianParams& g, double zeta);

struct EvolveOptions {
  double tol = 1e-11;
  int max_splits = 20;
};

/// Exact Gaussian solution at time T of i psi_t = (-Lap + u0 x^2 + u x) psi,
/// composed from the classical reduction and the (a, b, zeta) representation.
/// Splits [0, T] on Riccati blow-up; throws BlowUp after max_splits.
GaussianParams evolve_gaussian(const GaussianParams& g0, const ControlSignal& u0,
                               const ControlSignal& u, double T, const EvolveOptions& opt = {});
GaussianState evolve_gaussian(const GaussianState& g0, const ControlSignal& u0,
                              const ControlSignal& u, double T, const EvolveOptions& opt = {});

/// Independent oracle: direct integration of the Gaussian moment equations
///   A' = i (u0 - 4 A^2), q' = 2p, p' = -2 u0 q - u, gamma' = p^2 - 2A - u0 q^2 - u q.
GaussianParams evolve_gaussian_direct(const GaussianParams& g0, const ControlSignal& u0,
                                      const ControlSignal& u, double T, double tol = 1e-11);

}  // namespace stqc
