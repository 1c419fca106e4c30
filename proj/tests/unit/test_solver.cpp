#include <doctest.h>

#include <cmath>
#include <random>

#include "stqc/errors.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/solver.hpp"
#include "stqc/states.hpp"

using namespace stqc;

namespace {
GridPtr grid() { return Grid::make(1024, 12.0); }

ControlSchedule mixed_schedule() {
  ControlSchedule s;
  s.append(Segment{0.2, 1.0, 0.5, 0.0, {}});
  s.append(Segment{0.15, -0.5, 0.0, 0.3, {}});
  s.append(Segment{0.25, 0.0, 0.0, 0.0, ControlProfile::sampled({0.5, 2.0, -1.0})});
  return s;
}

PotentialBindings bindings() {
  PotentialBindings p;
  p.drift = potential::AbsPower{1.0, 1.0};
  p.w2 = potential::GaussianExp{-1.0, 0.0};
  return p;
}
}  // namespace

TEST_CASE("Hermite functions acquire their eigenphases") {
  const auto g = grid();
  ControlSchedule s;
  s.append(Segment{0.5, 1.0, 0.0, 0.0, {}});
  for (int k : {0, 1, 3}) {
    const auto h = hermite_function(g, k);
    const auto out = propagate_limiting(h, s);
    const auto expected = h.scaled(std::polar(1.0, -0.5 * (2 * k + 1)));
    CHECK(out.distance(expected) < 1e-4);
  }
}

TEST_CASE("segment concatenation is exact") {
  const auto g = grid();
  std::mt19937_64 rng(2);
  const auto psi = random_smooth_state(g, rng);
  const auto s = mixed_schedule();
  ControlSchedule first;
  first.append(s.segments()[0]);
  ControlSchedule rest;
  rest.append(s.segments()[1]);
  rest.append(s.segments()[2]);
  const auto whole = propagate(psi, s, bindings());
  const auto split = propagate(propagate(psi, first, bindings()), rest, bindings());
  CHECK(whole.distance(split) < 1e-12);
}

TEST_CASE("time reversal returns the initial state") {
  const auto g = grid();
  std::mt19937_64 rng(5);
  const auto psi = random_smooth_state(g, rng);
  const auto s = mixed_schedule();
  const auto fwd = propagate(psi, s, bindings());
  const auto back = propagate(fwd.conjugated(), s.reversed(), bindings()).conjugated();
  CHECK(back.distance(psi) < 1e-10);
}

TEST_CASE("Strang splitting converges at second order") {
  const auto g = grid();
  std::mt19937_64 rng(8);
  const auto psi = random_smooth_state(g, rng);
  const auto s = mixed_schedule();
  PotentialBindings smooth;
  smooth.drift = potential::GaussianExp{-0.5, 0.2};
  smooth.w2 = potential::GaussianExp{-1.0, 0.0};
  auto run = [&](double dt) {
    PropagateOptions o;
    o.dt.max_phase = 1e9;
    o.dt.min_substeps = 1;
    o.dt.max_dt = dt;
    return propagate(psi, s, smooth, o);
  };
  const auto ref = run(1e-4);
  const double e1 = run(0.01).distance(ref);
  const double e2 = run(0.005).distance(ref);
  const double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("limiting system agrees with the Gaussian solution") {
  const auto g = Grid::make(2048, 16.0);
  ControlSchedule s;
  s.append(Segment{0.4, 2.0, 0.0, 0.5, {}});
  s.append(Segment{0.3, -1.0, 0.0, -0.3, ControlProfile::sampled({-1.0, 0.0, 1.0, 3.0})});
  const GaussianState g0{0.0, 0.8, 0.1, 0.3, -0.2};
  PropagateOptions o;
  o.dt.max_dt = 2e-4;
  const auto out = propagate_limiting(sample_gaussian(g, g0), s, o);
  const auto exact = evolve_gaussian(g0, ControlSignal(s, ControlSlot::Quad),
                                     ControlSignal(s, ControlSlot::Linear), s.total_duration());
  CHECK(out.distance(sample_gaussian(g, exact)) < 1e-5);
}

TEST_CASE("trajectory sampling and step planning") {
  const auto g = grid();
  const auto s = mixed_schedule();
  std::vector<double> times;
  PropagateOptions o;
  o.sample_interval = 0.05;
  o.sink = [&](double t, const WaveFunction&) { times.push_back(t); };
  const auto psi = ground_gaussian(g);
  const auto out = propagate(psi, s, bindings(), o);
  REQUIRE(!times.empty());
  CHECK(times.front() == 0.0);
  CHECK(times.back() == doctest::Approx(0.6));
  CHECK(times.size() >= 12);
  CHECK(out.distance(propagate(psi, s, bindings())) < 1e-14);

  const auto n = plan_substeps(*g, s, bindings(), DtPolicy{});
  CHECK(n.size() == 3);
  for (auto k : n) CHECK(k >= 16);

  ControlSchedule stiff;
  stiff.append(Segment{100.0, 1e6, 0.0, 0.0, {}});
  CHECK_THROWS_AS(plan_substeps(*g, stiff, bindings(), DtPolicy{}), StiffSegment);

  ControlSchedule w2;
  w2.append(Segment{0.1, 0.0, 1.0, 0.0, {}});
  CHECK_THROWS_AS(propagate_limiting(psi, w2), InvalidArgument);
}

TEST_CASE("bindings json round trip") {
  const auto b = bindings();
  const auto back = PotentialBindings::from_json(b.to_json());
  CHECK(back.to_json() == b.to_json());
}
