#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stqc/control.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/primitives.hpp"
#include "stqc/solver.hpp"

namespace stqc {

namespace factor {
/// e^{i a x^2}
struct QuadPhase {
  double a = 0.0;
};
/// D_beta, beta != 0; beta < 0 composes the reflection x -> -x.
struct Dilate {
  double beta = 1.0;
};
/// e^{i sigma Lap}
struct FreeProp {
  double sigma = 0.0;
};
/// e^{i p x}
struct PlaneWave {
  double p = 0.0;
};
/// tau_q
struct Translate {
  double q = 0.0;
};
/// e^{i theta}
struct GlobalPhase {
  double theta = 0.0;
};
/// Composite e^{i zeta (Lap - x^2)}; evaluated on the grid through the solver.
struct Harmonic {
  double zeta = 0.0;
};
}  // namespace factor

using Factor = std::variant<factor::QuadPhase, factor::Dilate, factor::FreeProp, factor::PlaneWave,
                            factor::Translate, factor::GlobalPhase, factor::Harmonic>;

/// Operator product F_0 F_1 ... F_{n-1}: the last factor acts first.
using FactorWord = std::vector<Factor>;

struct WordEvalOptions {
  GuardOptions guard;
  /// Step policy for Harmonic factors.
  DtPolicy harmonic_dt;
};

WaveFunction evaluate_word(const FactorWord& word, const WaveFunction& psi,
                           const WordEvalOptions& options = {});
GaussianParams evaluate_word(const FactorWord& word, const GaussianParams& g);

/// Formal inverse: reversed order with negated / reciprocal parameters.
FactorWord inverse_word(const FactorWord& word);

struct CommutedTriple {
  double a;
  double beta;
  double sigma;
  /// Global phase: -sgn(s) pi/2 when 1 + 4as < 0, else 0.
  double theta = 0.0;
};

/// e^{is Lap} e^{ia x^2} = e^{i theta} e^{i a' x^2} D_{beta'} e^{i sigma' Lap} with
/// (a', beta', sigma') = (a, 1, s) / (1 + 4as).
/// Throws InvalidArgument for s = 0 and ResonantPair when |1 + 4as| < tol.
CommutedTriple commute_free_past_phase(double s, double a, double tol = 1e-9);

struct DeltaPolicy {
  /// Pairs with |1 + 4 s a| below this are resonant.
  double resonance_tol = 1e-9;
  /// Perturbed pairs must satisfy |1 + 4 (s + delta) a| >= margin.
  double margin = 0.1;
  /// Candidates delta = 2^{-k}, k from k_max down to k_min.
  int k_min = -20;
  int k_max = 60;
  /// States on which ||(e^{i delta Lap} - I) chi|| is reported.
  std::vector<WaveFunction> test_states;
};

struct CompressedWord {
  double a = 0.0;
  double beta = 1.0;
  double sigma = 0.0;
  /// Accumulated global phase of the commutations.
  double theta = 0.0;
  std::optional<double> used_delta;
  std::size_t resonant_pairs = 0;
  /// Per test state: sum over perturbed pairs of ||(e^{i delta Lap} - I) chi||,
  /// chi the original prefix applied to the state. A bound on the L2 gap.
  std::vector<double> delta_bound;

  FactorWord word() const;
};

/// Reduces a word over {QuadPhase, Dilate, FreeProp} to
/// e^{i theta} e^{i a x^2} D_beta e^{i sigma Lap}.
CompressedWord compress_word(const FactorWord& word, const DeltaPolicy& policy = {});

enum class ReachRoute {
  /// a' = -4a^2 - u per interval, factors [QuadPhase(a), Dilate(1/b), FreeProp(zeta)].
  Free,
  /// (a, b, zeta) of the harmonic system, factors [QuadPhase(a), Dilate(1/b), Harmonic(zeta)].
  Harmonic,
};

struct ReachabilityWord {
  FactorWord word;
  std::vector<double> subdivision;
  /// (a, b, zeta) per interval in time order.
  std::vector<std::array<double, 3>> triples;
};

/// Exact factor word of i psi_t = (-Lap + u |x|^2) psi on [0, T]: a uniform
/// subdivision with 4 (T_j - T_{j-1}) ||u||_{L1(T_{j-1}, T_j)} <= bound (< 1).
ReachabilityWord exact_reachability_word(const ControlSignal& u, double T,
                                         ReachRoute route = ReachRoute::Free,
                                         double bound = 0.5, double tol = 1e-12);

nlohmann::json word_to_json(const FactorWord& word);
FactorWord word_from_json(const nlohmann::json& j);

}  // namespace stqc
