#pragma once

#include <functional>
#include <optional>

#include "stqc/control.hpp"
#include "stqc/potential.hpp"
#include "stqc/primitives.hpp"

namespace stqc {

/// Drift V and the bounded control potential W2 of
///   i psi_t = (-Lap + V + u1 |x|^2 + u2 W2 + ux x) psi.
struct PotentialBindings {
  PotentialSpec drift = potential::Zero{};
  PotentialSpec w2 = potential::Zero{};

  nlohmann::json to_json() const;
  static PotentialBindings from_json(const nlohmann::json& j);
};

/// Sub-step selection per segment:
///   n = max(min_substeps, ceil(tau * Vmax / max_phase), ceil(tau / max_dt)),
/// where Vmax bounds |V_total| over |x| <= phase_radius (default: the box edge L).
struct DtPolicy {
  double max_phase = 0.05;
  std::optional<double> phase_radius;
  std::size_t min_substeps = 16;
  double max_substeps = 1e7;
  std::optional<double> max_dt;
};

using TrajectorySink = std::function<void(double t, const WaveFunction& psi)>;

struct PropagateOptions {
  DtPolicy dt;
  /// Called at t = 0, at every segment end and every sample_interval inside segments.
  TrajectorySink sink;
  double sample_interval = 0.0;
  /// Throw SupportOverflow when a segment ends with boundary mass above the guard.
  bool guard_segments = false;
  GuardOptions guard;
};

struct PropagateStats {
  std::size_t substeps = 0;
  double max_boundary_mass = 0.0;
};

/// Number of Strang sub-steps chosen for each segment; throws StiffSegment.
std::vector<std::size_t> plan_substeps(const Grid& grid, const ControlSchedule& schedule,
                                       const PotentialBindings& pots, const DtPolicy& policy);

/// Second-order Strang splitting of the piecewise propagator
///   prod_j exp(i tau_j (Lap - V - u1^j |x|^2 - u2^j W2 - ux^j x)).
/// Profile segments use the mean of u1 over each sub-step.
WaveFunction propagate(const WaveFunction& psi0, const ControlSchedule& schedule,
                       const PotentialBindings& pots, const PropagateOptions& options = {},
                       PropagateStats* stats = nullptr);

/// The limiting system i psi_t = (-Lap + u0 |x|^2 + u x) psi: zero drift, the
/// schedule's u1 slot read as u0 and ux as u. Rejects segments with u2 != 0.
WaveFunction propagate_limiting(const WaveFunction& psi0, const ControlSchedule& schedule,
                                const PropagateOptions& options = {},
                                PropagateStats* stats = nullptr);

}  // namespace stqc
