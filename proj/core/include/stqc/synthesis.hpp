#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stqc/control.hpp"
#include "stqc/grid.hpp"
#include "stqc/solver.hpp"

namespace stqc {

namespace target {
/// e^{i delta |x|^2}
struct QuadPhase {
  double delta = 0.0;
};
/// D_alpha, alpha > 0
struct Dilation {
  double alpha = 1.0;
};
/// e^{i sigma Lap}, sigma >= 0
struct Free {
  double sigma = 0.0;
};
/// e^{i sigma (Lap - |x|^2)}, sigma >= 0
struct Harmonic {
  double sigma = 0.0;
};
/// e^{i sigma (Lap - |x|^2 + alpha W2)}, sigma >= 0
struct HarmonicWithW2 {
  double sigma = 0.0;
  double alpha = 0.0;
};
/// e^{i c W2}
struct W2Phase {
  double c = 0.0;
};
}  // namespace target

using SynthesisTarget = std::variant<target::QuadPhase, target::Dilation, target::Free,
                                     target::Harmonic, target::HarmonicWithW2, target::W2Phase>;

nlohmann::json target_to_json(const SynthesisTarget& t);
SynthesisTarget target_from_json(const nlohmann::json& j);

struct SynthesisRequest {
  SynthesisTarget target;
  /// Maximal total schedule duration.
  double budget = 0.05;
  /// Target L2 error on the validation states.
  double tol = 1e-2;
  /// Drift V and the W2 binding.
  PotentialBindings pots;

  /// Throws InvalidArgument for budget <= 0, tol <= 0 or an invalid target.
  void validate() const;
  nlohmann::json to_json() const;
  static SynthesisRequest from_json(const nlohmann::json& j);
};

/// Which gadget produced which segments, with its internal parameters.
struct GadgetTrace {
  std::string gadget;
  nlohmann::json params = nlohmann::json::object();
  std::size_t first_segment = 0;
  std::size_t segment_count = 0;
  std::vector<GadgetTrace> children;

  nlohmann::json to_json() const;
  static GadgetTrace from_json(const nlohmann::json& j);
};

struct SynthesisReport {
  SynthesisRequest request;
  ControlSchedule schedule;
  /// Per validation state.
  std::vector<double> achieved_error;
  double total_duration = 0.0;
  GadgetTrace gadget_trace;
  /// Refinement knob (tau, t, n or T) of the returned schedule.
  double knob = 0.0;
  std::size_t rounds = 0;
  /// Set when achieved_error exceeds tol.
  bool shortfall = false;

  double max_error() const;
  nlohmann::json to_json() const;
  static SynthesisReport from_json(const nlohmann::json& j);
};

/// Schedule of duration T whose |x|^2 control drives (a, b, zeta) from (0, 1, 0)
/// to (0, 1, sigma), realizing e^{i sigma (Lap - |x|^2)}. sigma = 0 gives the
/// empty schedule and sigma = T the constant control u1 = 1. Otherwise the
/// bump construction; resolution 0 keeps the analytic profile, resolution > 0
/// samples it on that many cells. Throws InvalidArgument when sigma / T < 1.
ControlSchedule synthesize_exact_harmonic(double sigma, double T, std::size_t resolution = 0);

/// One segment of duration tau with u1 = -delta / tau.
ControlSchedule gadget_quad_phase(double delta, double tau);

/// e^{i log(alpha)|x|^2/(4 tau)} e^{i tau (Lap - V + log^2(alpha)|x|^2/(4 tau^2))}
/// e^{-i log(alpha)|x|^2/(4 tau)}, the outer phases realized by gadget_quad_phase
/// over tau * inner_ratio each. alpha = 1 gives a single drift segment of length tau.
ControlSchedule gadget_dilation(double alpha, double tau, double inner_ratio);

/// Free-evolution time carried by the dilation gadget with V = 0:
///   gadget_dilation(alpha, tau) -> D_alpha e^{i kappa Lap}, kappa = tau (alpha^2 - 1) / (2 log alpha).
double dilation_gadget_free_time(double alpha, double tau);

/// gadget_dilation(t^{-1/2}) then a drift segment then gadget_dilation(t^{1/2}).
/// The drift lasts sigma t, or with compensation sigma t minus the free time the
/// two dilation gadgets add in the rescaled frame (InvalidArgument if not positive).
ControlSchedule gadget_free(double sigma, double t, double dilation_tau, double inner_ratio,
                            bool compensate = true);

/// One segment of duration tau with u2 = -c / tau.
ControlSchedule gadget_w2_phase(double c, double tau);

/// n blocks, each gadget_w2_phase(alpha sigma / n, tau_block) followed by
/// synthesize_exact_harmonic(sigma / n, T_block). Throws BudgetExceeded when the
/// total duration exceeds budget.
ControlSchedule trotter_compose(const target::HarmonicWithW2& target, int n, double T_block,
                                double tau_block, double budget, std::size_t resolution = 0);

struct PlanOptions {
  GridPtr grid;
  /// Defaults to validation_panel(grid).
  std::vector<WaveFunction> validation_states;
  DtPolicy dt;
  /// Step policy of the reference propagation for HarmonicWithW2 targets.
  DtPolicy reference_dt{0.05, std::nullopt, 16, 1e7, 1e-4};
  /// First value of the refinement knob; defaults per target from the budget.
  std::optional<double> initial_knob;
  int max_rounds = 12;
  /// Dilation gadgets use inner_ratio = min(1, inner_ratio_scale * tau^2).
  double inner_ratio_scale = 0.01;
  /// gadget_free uses dilation_tau = free_dilation_scale * t.
  double free_dilation_scale = 0.1;
  bool compensate = true;
  /// Trotter harmonic blocks use T_block = trotter_harmonic_share * budget / n
  /// and W2 blocks tau_block = trotter_w2_share * budget / n^2.
  double trotter_harmonic_share = 0.8;
  double trotter_w2_share = 0.16;
  /// Return a report flagged shortfall instead of throwing ToleranceNotMet.
  bool allow_shortfall = false;
  /// Propagate the validation states; when false the report carries no errors.
  bool validate = true;
  std::size_t workers = 0;
};

/// e^{i sigma (Lap - |x|^2)} on the grid as products of
/// e^{-i tan(z)|x|^2/2} e^{i sin(2z)/2 Lap} e^{-i tan(z)|x|^2/2} over pieces |z| <= pi/4.
WaveFunction apply_harmonic_reference(const WaveFunction& psi, double sigma);

/// Grid oracle of the target operator applied to psi.
WaveFunction apply_target(const SynthesisTarget& target, const WaveFunction& psi,
                          const PotentialBindings& pots, const PlanOptions& options);

/// Builds the schedule for one value of the refinement knob (tau for phase and
/// dilation targets, t for Free, T for Harmonic, n for HarmonicWithW2) and
/// validates it. Throws BudgetExceeded when the schedule exceeds the budget.
SynthesisReport synthesize_at(const SynthesisRequest& request, double knob,
                              const PlanOptions& options);

/// Geometric refinement of the knob (halving, doubling n) until tol is met.
/// Throws ToleranceNotMet with the best error after max_rounds unless
/// allow_shortfall is set.
SynthesisReport plan(const SynthesisRequest& request, const PlanOptions& options);

}  // namespace stqc
