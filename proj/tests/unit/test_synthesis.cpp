#include <doctest.h>

#include <cmath>

#include "stqc/abz.hpp"
#include "stqc/errors.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/primitives.hpp"
#include "stqc/states.hpp"
#include "stqc/synthesis.hpp"

using namespace stqc;

namespace {
GridPtr grid() { return Grid::make(2048, 12.0); }
}  // namespace

TEST_CASE("exact harmonic schedule") {
  CHECK(synthesize_exact_harmonic(0.0, 0.01).empty());
  const auto unit = synthesize_exact_harmonic(0.2, 0.2);
  REQUIRE(unit.size() == 1);
  CHECK(unit.segments()[0].u1 == 1.0);
  CHECK_FALSE(unit.segments()[0].has_profile());
  CHECK_THROWS_AS(synthesize_exact_harmonic(0.1, 0.2), InvalidArgument);

  const auto s = synthesize_exact_harmonic(0.3, 0.01);
  REQUIRE(s.size() == 1);
  CHECK(s.total_duration() == doctest::Approx(0.01));
  AbzOptions opt;
  opt.tol = 1e-12;
  const auto sol = solve_abz(ControlSignal(s, ControlSlot::Quad), 0.01, opt);
  CHECK(std::abs(sol.a.back()) < 1e-8);
  CHECK(std::abs(sol.b.back() - 1.0) < 1e-8);
  CHECK(std::abs(sol.zeta.back() - 0.3) < 1e-8);

  const auto sampled = synthesize_exact_harmonic(0.3, 0.01, 64);
  REQUIRE(sampled.segments()[0].has_profile());
  CHECK(sampled.segments()[0].u1_profile->samples.size() == 64);
}

TEST_CASE("harmonic reference factorization") {
  const auto g = grid();
  const GaussianState gs{0.0, 0.7, 0.2, 0.5, -0.4};
  const auto g0 = GaussianParams::from_state(gs);
  for (double sigma : {0.3, 1.0, 2.5}) {
    const auto out = apply_harmonic_reference(sample_gaussian(g, gs), sigma);
    CHECK(out.distance(sample_gaussian(g, gauss_harmonic(g0, sigma))) < 1e-9);
  }
}

TEST_CASE("quadratic phase gadget converges") {
  const auto g = grid();
  const auto psi = ground_gaussian(g);
  const auto s = gadget_quad_phase(0.7, 0.1);
  REQUIRE(s.size() == 1);
  CHECK(s.segments()[0].u1 == doctest::Approx(-7.0));
  double prev = 1e9;
  for (double tau : {1e-1, 1e-2, 1e-3}) {
    const double e = propagate(psi, gadget_quad_phase(0.7, tau), {}).distance(apply_quadratic_phase(psi, 0.7));
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("dilation gadget realizes a dilation after free evolution") {
  const auto g = grid();
  const auto psi = ground_gaussian(g);
  CHECK(gadget_dilation(1.0, 0.1, 0.5).size() == 1);
  const double tau = 0.05;
  const auto s = gadget_dilation(2.0, tau, 1e-6);
  REQUIRE(s.size() == 3);
  CHECK(s.total_duration() == doctest::Approx(tau * (1 + 2e-6)));
  CHECK(s.segments()[0].u1 > 0.0);
  CHECK(s.segments()[1].u1 == doctest::Approx(-std::log(2.0) * std::log(2.0) / (4 * tau * tau)));
  const double kappa = dilation_gadget_free_time(2.0, tau);
  CHECK(kappa == doctest::Approx(tau * 3.0 / (2 * std::log(2.0))));
  const auto out = propagate(psi, s, {});
  const auto expected = apply_dilation(apply_free_propagator(psi, kappa), 2.0);
  CHECK(out.distance(expected) < 1e-4);
}

TEST_CASE("free gadget") {
  const auto g = grid();
  const auto psi = ground_gaussian(g);
  const auto plain = gadget_free(0.3, 0.2, 0.02, 1e-6, false);
  CHECK(plain.size() == 7);
  CHECK(plain.segments()[3].tau == doctest::Approx(0.06));
  const auto comp = gadget_free(0.3, 0.2, 0.02, 1e-6, true);
  CHECK(comp.segments()[3].tau < 0.06);
  const auto target = apply_free_propagator(psi, 0.3);
  CHECK(propagate(psi, comp, {}).distance(target) < 1e-3);
  CHECK(propagate(psi, plain, {}).distance(target) > 1e-2);
  CHECK_THROWS_AS(gadget_free(0.3, 0.2, 1.0, 1e-6, true), InvalidArgument);
}

TEST_CASE("W2 phase gadget") {
  const auto g = grid();
  const auto psi = boosted_gaussian(g, 1.0);
  PotentialBindings pots;
  pots.w2 = potential::GaussianExp{-1.0, 0.3};
  PlanOptions po;
  po.grid = g;
  const auto ref = apply_target(target::W2Phase{0.4}, psi, pots, po);
  double prev = 1e9;
  for (double tau : {1e-2, 1e-3, 1e-4}) {
    const auto s = gadget_w2_phase(0.4, tau);
    CHECK(s.segments()[0].u2 == doctest::Approx(-0.4 / tau));
    const auto out = propagate(psi, s, pots);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double e = out.distance(ref);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("Trotter composition") {
  const target::HarmonicWithW2 t{0.3, 1.0};
  const auto s = trotter_compose(t, 4, 0.05, 0.01, 0.25);
  CHECK(s.size() == 8);
  CHECK(s.total_duration() == doctest::Approx(0.24));
  CHECK(s.segments()[0].u2 == doctest::Approx(-0.075 / 0.01));
  CHECK_THROWS_AS(trotter_compose(t, 4, 0.05, 0.01, 0.2), BudgetExceeded);
  const auto pure = trotter_compose(target::HarmonicWithW2{0.3, 0.0}, 1, 0.1, 0.01, 0.25);
  CHECK(pure.to_json() == synthesize_exact_harmonic(0.3, 0.1).to_json());
}

TEST_CASE("plan dispatch, budget and tolerance") {
  PlanOptions po;
  po.grid = grid();
  po.workers = 1;
  SynthesisRequest id;
  id.target = target::Dilation{1.0};
  const auto rep = plan(id, po);
  CHECK(rep.schedule.empty());
  CHECK(rep.max_error() == 0.0);

  SynthesisRequest quad;
  quad.target = target::QuadPhase{0.5};
  quad.budget = 0.05;
  quad.tol = 1e-2;
  const auto q = plan(quad, po);
  CHECK(q.total_duration <= quad.budget);
  CHECK(q.max_error() <= quad.tol);
  CHECK_FALSE(q.shortfall);
  CHECK(q.achieved_error.size() == 3);

  quad.tol = 1e-12;
  po.max_rounds = 2;
  CHECK_THROWS_AS(plan(quad, po), ToleranceNotMet);
  po.allow_shortfall = true;
  const auto sf = plan(quad, po);
  CHECK(sf.shortfall);
  CHECK(sf.rounds == 2);

  const auto back = SynthesisReport::from_json(q.to_json());
  CHECK(back.to_json() == q.to_json());
  SynthesisRequest bad;
  bad.budget = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
