#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "stqc/control.hpp"

namespace stqc {

/// Which Riccati system is integrated.
///  Harmonic: a' = -4a^2 + 1/b^4 - u, psi = e^{i a x^2} D_{1/b} e^{i zeta (Lap - x^2)} psi0.
///  Free:     a' = -4a^2 - u,         psi = e^{i a x^2} D_{1/b} e^{i zeta Lap} psi0.
/// In both, b' = 4ab, zeta' = 1/b^2 and (a, b, zeta)(0) = (0, 1, 0).
enum class AbzVariant { Harmonic, Free };

struct AbzOptions {
  AbzVariant variant = AbzVariant::Harmonic;
  double tol = 1e-10;
  /// Escape bound: |a| > bound or b outside [1/bound, bound].
  double bound = 1e8;
  /// Number of uniformly spaced samples (including 0 and T); ignored when
  /// sample_times is nonempty.
  std::size_t n_samples = 2;
  std::vector<double> sample_times;
  /// Throw BlowUp instead of recording blow_up_time.
  bool throw_on_blowup = false;
};

struct AbzSolution {
  std::vector<double> t;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> zeta;
  /// Optional classical part.
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> theta;
  std::optional<double> blow_up_time;

  nlohmann::json to_json() const;
  static AbzSolution from_json(const nlohmann::json& j);
};

/// Integrates the (a, b, zeta) system under the |x|^2 coefficient u on [0, T].
AbzSolution solve_abz(const ControlSignal& u, double T, const AbzOptions& options = {});

struct ClassicalSolution {
  std::vector<double> t;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> theta;
};

/// q' = p, p' = -4 u0 q - 2 u, theta' = u0 q^2 - p^2 / 4, all zero at t = 0.
ClassicalSolution solve_classical(const ControlSignal& u0, const ControlSignal& u, double T,
                                  double tol = 1e-10, std::size_t n_samples = 2,
                                  const std::vector<double>& sample_times = {});

}  // namespace stqc
