#include <doctest.h>

#include <cmath>

#include "stqc/control.hpp"
#include "stqc/errors.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/primitives.hpp"
#include "stqc/states.hpp"

using namespace stqc;

namespace {
double gap(const GaussianParams& x, const GaussianParams& y, const GridPtr& g) {
  return sample_gaussian(g, x).distance(sample_gaussian(g, y));
}

ControlSchedule wiggle_schedule() {
  ControlSchedule s;
  s.append(Segment{0.3, 1.5, 0.0, 0.4, {}});
  s.append(Segment{0.5, -0.8, 0.0, -0.2, ControlProfile::sampled({-0.8, 0.3, 2.0, 0.1})});
  s.append(Segment{0.4, 0.0, 0.0, 0.0, {}});
  return s;
}
}  // namespace

TEST_CASE("normalization constant") {
  CHECK(gaussian_norm_constant(0.5) == doctest::Approx(std::pow(1.0 / std::acos(-1.0), 0.25)));
  CHECK(gaussian_normalization_self_check() < 1e-12);
  const auto g = Grid::make(1024, 10.0);
  GaussianState s{0.3, 0.8, -0.5, 1.0, 0.7};
  CHECK(sample_gaussian(g, s).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(GaussianParams::from_state(s).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state conversions and json") {
  GaussianState s{0.3, 0.8, -0.5, 1.0, 0.7};
  const auto back = GaussianParams::from_state(s).to_state();
  CHECK(back.theta == doctest::Approx(0.3));
  CHECK(back.a == doctest::Approx(0.8));
  CHECK(back.b == doctest::Approx(-0.5));
  CHECK(back.p == doctest::Approx(1.0));
  CHECK(back.q == doctest::Approx(0.7));
  const auto j = s.to_json();
  CHECK(j["p"].is_array());
  const auto r = GaussianState::from_json(j);
  CHECK(r.a == s.a);
  CHECK(r.q == s.q);
  GaussianState bad;
  bad.a = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("parameter algebra matches grid primitives") {
  const auto g = Grid::make(2048, 16.0);
  const auto g0 = GaussianParams::from_state(GaussianState{0.1, 0.9, 0.3, 0.5, -0.4});
  const auto psi = sample_gaussian(g, g0);
  CHECK(sample_gaussian(g, gauss_quad_phase(g0, 0.6)).distance(apply_quadratic_phase(psi, 0.6)) < 1e-12);
  CHECK(sample_gaussian(g, gauss_dilate(g0, 1.4)).distance(apply_dilation(psi, 1.4)) < 1e-10);
  CHECK(sample_gaussian(g, gauss_dilate(g0, 0.7)).distance(apply_dilation(psi, 0.7)) < 1e-10);
  CHECK(sample_gaussian(g, gauss_dilate(g0, -1.0)).distance(apply_reflection(psi)) < 1e-12);
  CHECK(sample_gaussian(g, gauss_free(g0, 0.4)).distance(apply_free_propagator(psi, 0.4)) < 1e-10);
  CHECK(sample_gaussian(g, gauss_free(g0, -0.3)).distance(apply_free_propagator(psi, -0.3)) < 1e-10);
  const auto moved = apply_plane_wave_and_translation(psi, 0.0, 1.2, 0.0);
  CHECK(sample_gaussian(g, gauss_translate(g0, 1.2)).distance(moved) < 1e-10);
  const auto waved = apply_plane_wave_and_translation(psi, 0.8, 0.0, 0.5);
  CHECK(sample_gaussian(g, gauss_global_phase(gauss_plane_wave(g0, 0.8), 0.5)).distance(waved) < 1e-12);
}

TEST_CASE("harmonic action") {
  const auto g = Grid::make(1024, 12.0);
  GaussianParams ground;
  ground.A = {0.5, 0.0};
  ground.gamma = {0.0, -std::log(std::pow(std::acos(-1.0), -0.25))};
  // ground state eigenvalue 1: e^{i zeta (Lap - x^2)} h0 = e^{-i zeta} h0
  for (double zeta : {0.3, 2.0, 7.5, -4.1}) {
    const auto out = gauss_harmonic(ground, zeta);
    CHECK(gap(out, gauss_global_phase(ground, -zeta), g) < 1e-10);
  }
  // zeta = pi/2 acts as -i times the reflection, zeta = pi as -1
  const auto g0 = GaussianParams::from_state(GaussianState{0.0, 1.3, 0.2, 0.4, 0.5});
  const double pi = std::acos(-1.0);
  CHECK(gap(gauss_harmonic(g0, pi / 2), gauss_global_phase(gauss_dilate(g0, -1.0), -pi / 2), g) < 1e-9);
  CHECK(gap(gauss_harmonic(g0, pi), gauss_global_phase(g0, -pi), g) < 1e-9);
  // composition across the caustic at pi/2
  CHECK(gap(gauss_harmonic(gauss_harmonic(g0, 1.0), 1.2), gauss_harmonic(g0, 2.2), g) < 1e-9);
}

TEST_CASE("reduction agrees with direct moment integration") {
  const auto g = Grid::make(2048, 16.0);
  const auto s = wiggle_schedule();
  const ControlSignal u0(s, ControlSlot::Quad);
  const ControlSignal u(s, ControlSlot::Linear);
  const double T = s.total_duration();
  const auto g0 = GaussianParams::from_state(GaussianState{0.2, 0.7, 0.1, -0.3, 0.4});
  const auto a = evolve_gaussian(g0, u0, u, T);
  const auto b = evolve_gaussian_direct(g0, u0, u, T);
  CHECK(gap(a, b, g) < 1e-8);
}

TEST_CASE("evolution through Riccati blow-up") {
  const auto g = Grid::make(1024, 12.0);
  const auto g0 = GaussianParams::from_state(GaussianState{0.0, 0.6, 0.0, 0.5, 0.3});
  const double T = 3.0;
  const auto u0 = ControlSignal::constant(4.0, T);
  const auto u = ControlSignal::zero(T);
  const auto a = evolve_gaussian(g0, u0, u, T);
  const auto b = evolve_gaussian_direct(g0, u0, u, T);
  CHECK(gap(a, b, g) < 1e-8);
}
