#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stqc/abz.hpp"
#include "stqc/errors.hpp"

using namespace stqc;

TEST_CASE("free Schroedinger closed form") {
  AbzOptions opt;
  opt.n_samples = 11;
  const auto sol = solve_abz(ControlSignal::zero(1.0), 1.0, opt);
  REQUIRE(sol.t.size() == 11);
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const double t = sol.t[i];
    CHECK(sol.a[i] == doctest::Approx(t / (1 + 4 * t * t)).epsilon(1e-9));
    CHECK(sol.b[i] == doctest::Approx(std::sqrt(1 + 4 * t * t)).epsilon(1e-9));
    CHECK(sol.zeta[i] == doctest::Approx(0.5 * std::atan(2 * t)).epsilon(1e-9));
  }
  CHECK_FALSE(sol.blow_up_time.has_value());
}

TEST_CASE("harmonic oscillator is a fixed point") {
  AbzOptions opt;
  opt.sample_times = {0.0, 0.3, 2.0};
  const auto sol = solve_abz(ControlSignal::constant(1.0, 2.0), 2.0, opt);
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    CHECK(std::abs(sol.a[i]) < 1e-12);
    CHECK(sol.b[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.zeta[i] == doctest::Approx(sol.t[i]).epsilon(1e-12));
  }
}

TEST_CASE("free variant and blow-up detection") {
  AbzOptions opt;
  opt.variant = AbzVariant::Free;
  opt.n_samples = 5;
  const auto flat = solve_abz(ControlSignal::zero(1.0), 1.0, opt);
  CHECK(flat.a.back() == 0.0);
  CHECK(flat.zeta.back() == doctest::Approx(1.0));

  // a' = -4a^2 - 1 gives a = -tan(2t)/2 and b = cos(2t), escaping at pi/4
  const auto sol = solve_abz(ControlSignal::constant(1.0, 1.0), 1.0, opt);
  REQUIRE(sol.blow_up_time.has_value());
  CHECK(*sol.blow_up_time == doctest::Approx(std::numbers::pi / 4).epsilon(1e-3));
  opt.throw_on_blowup = true;
  CHECK_THROWS_AS(solve_abz(ControlSignal::constant(1.0, 1.0), 1.0, opt), BlowUp);
}

TEST_CASE("piecewise control matches sequential integration") {
  ControlSchedule s;
  s.append(Segment{0.3, 2.0, 0.0, 0.0, {}});
  s.append(Segment{0.4, -1.0, 0.0, 0.0, {}});
  const ControlSignal u(s, ControlSlot::Quad);
  AbzOptions opt;
  opt.variant = AbzVariant::Free;
  const auto whole = solve_abz(u, 0.7, opt);
  // Closed form on the first piece: a = -sqrt(2)/2 tan(2 sqrt(2) t)
  const double r = std::sqrt(2.0);
  const auto first = solve_abz(u.slice(0.0, 0.3), 0.3, opt);
  CHECK(first.a.back() == doctest::Approx(-r / 2 * std::tan(2 * r * 0.3)).epsilon(1e-9));
  CHECK(std::isfinite(whole.a.back()));
}

TEST_CASE("classical reduction closed form") {
  const double c = 0.7;
  const double T = 1.3;
  const auto sol = solve_classical(ControlSignal::zero(T), ControlSignal::constant(c, T), T, 1e-12, 4);
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const double t = sol.t[i];
    CHECK(sol.q[i] == doctest::Approx(-c * t * t).epsilon(1e-9));
    CHECK(sol.p[i] == doctest::Approx(-2 * c * t).epsilon(1e-9));
    CHECK(sol.theta[i] == doctest::Approx(-c * c * t * t * t / 3).epsilon(1e-9));
  }
}

TEST_CASE("solution json round trip") {
  AbzOptions opt;
  opt.n_samples = 3;
  const auto sol = solve_abz(ControlSignal::zero(0.5), 0.5, opt);
  const auto back = AbzSolution::from_json(sol.to_json());
  CHECK(back.a == sol.a);
  CHECK(back.zeta == sol.zeta);
}
