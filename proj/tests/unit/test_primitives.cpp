#include <doctest.h>

#include <cmath>
#include <random>

#include "stqc/errors.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/primitives.hpp"
#include "stqc/states.hpp"

using namespace stqc;

namespace {
GridPtr default_grid() { return Grid::make(2048, 12.0); }
}  // namespace

TEST_CASE("quadratic phase") {
  const auto g = default_grid();
  std::mt19937_64 rng(1);
  const auto psi = random_smooth_state(g, rng);
  CHECK(apply_quadratic_phase(psi, 0.0).distance(psi) == 0.0);
  CHECK(apply_quadratic_phase(psi, 3.7).norm() == doctest::Approx(psi.norm()).epsilon(1e-12));
  CHECK(apply_quadratic_phase(apply_quadratic_phase(psi, 0.4), -0.4).distance(psi) < 1e-12);
}

TEST_CASE("plane wave and translation") {
  const auto g = default_grid();
  std::mt19937_64 rng(2);
  const auto psi = random_smooth_state(g, rng);
  CHECK(apply_plane_wave_and_translation(psi, 0, 0, 0).distance(psi) < 1e-15);
  const auto narrow =
      WaveFunction::sample(g, [](double x) { return std::exp(-8.0 * x * x); }).normalized();
  const auto moved = apply_plane_wave_and_translation(narrow, 0.0, 1.0, 0.0);
  std::size_t peak = 0;
  for (std::size_t j = 0; j < g->size(); ++j)
    if (std::abs(moved[j]) > std::abs(moved[peak])) peak = j;
  CHECK(std::abs(g->x(peak) - 1.0) <= g->spacing());
  const auto two = apply_plane_wave_and_translation(
      apply_plane_wave_and_translation(psi, 0, 0.7, 0), 0, -1.2, 0);
  CHECK(two.distance(apply_plane_wave_and_translation(psi, 0, -0.5, 0)) < 1e-10);
  CHECK(apply_plane_wave_and_translation(psi, 1.3, 0.4, 0.2).norm() ==
        doctest::Approx(1.0).epsilon(1e-10));
  const auto edge = WaveFunction::sample(g, [](double x) { return std::exp(-(x - 8) * (x - 8)); });
  CHECK_THROWS_AS(apply_plane_wave_and_translation(edge.normalized(), 0, 1.0, 0), WrapAroundRisk);
}

TEST_CASE("dilation") {
  const auto g = default_grid();
  std::mt19937_64 rng(3);
  const auto psi = random_smooth_state(g, rng);
  CHECK(apply_dilation(psi, 1.0).distance(psi) == 0.0);
  CHECK(apply_dilation(apply_dilation(psi, 1.5), 1.0 / 1.5).distance(psi) < 1e-8);
  CHECK(apply_dilation(psi, 1.5).norm() == doctest::Approx(1.0).epsilon(1e-8));

  GaussianState gs;
  gs.a = 0.8;
  const auto d = apply_dilation(sample_gaussian(g, gs), 1.7);
  GaussianState expect = gs;
  expect.a = 0.8 * 1.7 * 1.7;
  CHECK(d.distance(sample_gaussian(g, expect)) < 1e-8);

  const auto wide = WaveFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
  CHECK_THROWS_AS(apply_dilation(wide.normalized(), 0.2), SupportOverflow);
  CHECK_THROWS_AS(apply_dilation(psi, -1.0), InvalidArgument);
}

TEST_CASE("reflection") {
  const auto g = default_grid();
  std::mt19937_64 rng(4);
  const auto psi = random_smooth_state(g, rng);
  const auto r = apply_reflection(psi);
  for (std::size_t j = 1; j < g->size(); ++j) CHECK(r[j] == psi[g->size() - j]);
  CHECK(apply_reflection(r).distance(psi) == 0.0);
}

TEST_CASE("free propagator") {
  const auto g = default_grid();
  std::mt19937_64 rng(5);
  const auto psi = random_smooth_state(g, rng);
  CHECK(apply_free_propagator(psi, 0.0).distance(psi) == 0.0);
  const double k0 = g->k(5);
  const auto mode = WaveFunction::sample(g, [&](double x) { return std::polar(1.0, k0 * x); });
  const auto out = apply_free_propagator(mode, 0.3);
  CHECK(out.distance(mode.scaled(std::polar(1.0, -0.3 * k0 * k0))) < 1e-11);

  GaussianState gs;
  gs.a = 1.0;
  const auto free = apply_free_propagator(sample_gaussian(g, gs), 0.25);
  const auto exact = sample_gaussian(g, gauss_free(GaussianParams::from_state(gs), 0.25));
  CHECK(free.distance(exact) < 1e-8);
  CHECK(apply_free_propagator(apply_free_propagator(psi, 0.4), -0.4).distance(psi) < 1e-12);
}

TEST_CASE("kernel formula agrees with the Fourier multiplier") {
  const auto g = Grid::make(4096, 24.0);
  std::mt19937_64 rng(6);
  const RandomStateOptions localized{3, 1.0, 0.3, 0.6, 0.3};
  const auto psi = random_smooth_state(g, rng, localized);
  for (double s : {0.25, 0.5, 1.0, -0.5}) {
    const auto k = apply_exp_isDelta_kernel(psi, s);
    CHECK(k.distance(apply_free_propagator(psi, s)) < 1e-6);
  }
  const auto back = apply_exp_isDelta_kernel(apply_exp_isDelta_kernel(psi, 0.5), -0.5);
  CHECK(back.distance(psi) < 1e-6);

  GaussianState gs;
  gs.a = 1.0;
  const auto k = apply_exp_isDelta_kernel(sample_gaussian(g, gs), 0.25);
  CHECK(k.distance(sample_gaussian(g, gauss_free(GaussianParams::from_state(gs), 0.25))) < 1e-6);
  CHECK_THROWS_AS(apply_exp_isDelta_kernel(psi, 0.01), ChirpAliasing);
}
