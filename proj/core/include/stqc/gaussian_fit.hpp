#pragma once

#include <optional>

#include "stqc/gaussian.hpp"

namespace stqc {

struct FitOptions {
  /// Optional warm start (e.g. the fit at the previous sample time).
  std::optional<GaussianState> hint;
  int max_iterations = 200;
};

struct GaussianFit {
  GaussianState state;
  /// ||psi - ||psi|| g|| / ||psi|| for the fitted unit-norm Gaussian g.
  double residual = 0.0;
};

/// Best Gaussian approximation of psi. Initial guesses come from the first
/// moments of |psi|^2 and the probability current (plus local peaks of |psi|),
/// refined by Levenberg-Marquardt on the complex residual.
/// Throws InvalidArgument when ||psi|| is outside [0.9, 1.1] and FitFailed
/// when no candidate with a > 0 exists.
GaussianFit gaussian_fit(const WaveFunction& psi, const FitOptions& options = {});

}  // namespace stqc
