#include <doctest.h>

#include <cmath>
#include <random>

#include "stqc/errors.hpp"
#include "stqc/factor.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/states.hpp"

using namespace stqc;
using namespace stqc::factor;

namespace {
GridPtr grid() { return Grid::make(2048, 16.0); }
double gap(const GaussianParams& x, const GaussianParams& y, const GridPtr& g) {
  return sample_gaussian(g, x).distance(sample_gaussian(g, y));
}
}  // namespace

TEST_CASE("commutation of the free propagator past a quadratic phase") {
  const auto t = commute_free_past_phase(1.0, 1.0);
  CHECK(t.a == doctest::Approx(0.2));
  CHECK(t.beta == doctest::Approx(0.2));
  CHECK(t.sigma == doctest::Approx(0.2));
  CHECK_THROWS_AS(commute_free_past_phase(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(commute_free_past_phase(0.25, -1.0), ResonantPair);

  const auto g = grid();
  std::mt19937_64 rng(4);
  const RandomStateOptions calm{3, 1.0, 0.5, 1.0, 0.5};
  for (auto [s, a] : {std::pair{0.05, 1.0}, {-0.08, 2.5}, {0.1, -1.5}, {0.3, -2.0}, {-0.3, 2.0}}) {
    const auto psi = random_smooth_state(g, rng, calm);
    const auto c = commute_free_past_phase(s, a);
    const FactorWord lhs{FreeProp{s}, QuadPhase{a}};
    const FactorWord rhs{GlobalPhase{c.theta}, QuadPhase{c.a}, Dilate{c.beta}, FreeProp{c.sigma}};
    CHECK(evaluate_word(lhs, psi).distance(evaluate_word(rhs, psi)) < 1e-8);
  }
}

TEST_CASE("grid and Gaussian word evaluation agree") {
  const auto g = grid();
  const auto g0 = GaussianParams::from_state(GaussianState{0.0, 0.9, 0.2, 0.3, -0.5});
  const FactorWord w{GlobalPhase{0.4}, Translate{0.6}, PlaneWave{-0.7}, QuadPhase{0.3},
                     Dilate{-1.3},     FreeProp{0.2},  Harmonic{0.8},   Dilate{0.8}};
  const auto on_grid = evaluate_word(w, sample_gaussian(g, g0));
  CHECK(on_grid.distance(sample_gaussian(g, evaluate_word(w, g0))) < 1e-6);
  const auto inv = inverse_word(w);
  CHECK(gap(evaluate_word(inv, evaluate_word(w, g0)), g0, g) < 1e-10);
}

TEST_CASE("word json round trip") {
  const FactorWord w{QuadPhase{0.3}, Dilate{-2.0}, FreeProp{0.1}, PlaneWave{1.0},
                     Translate{0.5}, GlobalPhase{2.0}, Harmonic{0.7}};
  const auto back = word_from_json(word_to_json(w));
  CHECK(word_to_json(back) == word_to_json(w));
  CHECK_THROWS(word_from_json(nlohmann::json::parse(R"([{"op":"bogus"}])")));
}

TEST_CASE("compression of a generic word is exact") {
  const auto g = grid();
  const auto g0 = GaussianParams::from_state(GaussianState{0.0, 0.8, 0.1, 0.4, 0.3});
  const FactorWord w{FreeProp{0.1},  QuadPhase{0.7}, Dilate{1.3},   FreeProp{-0.05},
                     QuadPhase{-0.4}, Dilate{0.9},   FreeProp{0.2}, QuadPhase{0.5}};
  const auto c = compress_word(w);
  CHECK_FALSE(c.used_delta.has_value());
  CHECK(c.resonant_pairs == 0);
  CHECK(c.word().size() <= 4);
  CHECK(gap(evaluate_word(c.word(), g0), evaluate_word(w, g0), g) < 1e-10);
  CHECK(evaluate_word(c.word(), sample_gaussian(g, g0))
            .distance(evaluate_word(w, sample_gaussian(g, g0))) < 1e-8);
}

TEST_CASE("compression perturbs resonant pairs within the reported bound") {
  const auto g = grid();
  const double s = 0.05;
  DeltaPolicy policy;
  policy.test_states = {ground_gaussian(g)};
  const FactorWord w{FreeProp{s}, QuadPhase{-1.0 / (4.0 * s)}};
  const auto c = compress_word(w, policy);
  REQUIRE(c.used_delta.has_value());
  CHECK(c.resonant_pairs == 1);
  REQUIRE(c.delta_bound.size() == 1);
  const auto exact = evaluate_word(w, policy.test_states[0]);
  const auto approx = evaluate_word(c.word(), policy.test_states[0]);
  CHECK(approx.distance(exact) <= c.delta_bound[0] * (1 + 1e-6) + 1e-9);
  CHECK(std::abs(1 + 4 * (s + *c.used_delta) * (-1.0 / (4.0 * s))) >= policy.margin);
}

TEST_CASE("exact reachability word") {
  const auto g = grid();
  const auto u = ControlSignal::constant(5.0, 1.0);
  const auto r = exact_reachability_word(u, 1.0);
  // 4 h * 5 h <= 1/2 needs h <= 0.158, so seven intervals
  CHECK(r.subdivision.size() == 8);
  CHECK(r.triples.size() == 7);
  CHECK(r.word.size() == 21);
  const auto g0 = GaussianParams::from_state(GaussianState{0.0, 0.7, 0.0, 0.3, 0.2});
  const auto expected = evolve_gaussian(g0, u, ControlSignal::zero(1.0), 1.0);
  CHECK(gap(evaluate_word(r.word, g0), expected, g) < 1e-8);

  const auto h = exact_reachability_word(u, 1.0, ReachRoute::Harmonic);
  CHECK(gap(evaluate_word(h.word, g0), expected, g) < 1e-8);
}
