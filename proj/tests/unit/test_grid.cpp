#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stqc/errors.hpp"
#include "stqc/grid.hpp"
#include "stqc/states.hpp"

using namespace stqc;

TEST_CASE("grid geometry and frequency layout") {
  const auto g = Grid::make(16, 3.0);
  CHECK(g->spacing() * 16 == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(g->x(0) == -3.0);
  CHECK(g->frequency_index(0) == 0);
  CHECK(g->frequency_index(7) == 7);
  CHECK(g->frequency_index(8) == -8);
  CHECK(g->frequency_index(15) == -1);
  CHECK(g->k_nyquist() == doctest::Approx(std::numbers::pi / 3.0 * 8));
  for (std::size_t j = 1; j < 8; ++j) CHECK(g->k(j) == -g->k(16 - j));
}

TEST_CASE("grid rejects invalid parameters") {
  CHECK_THROWS_AS(Grid(12, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(16, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(16, 1.0, 2), InvalidArgument);
}

TEST_CASE("norm, inner product and diagnostics") {
  const auto g = Grid::make(2048, 12.0);
  const auto h0 = ground_gaussian(g);
  CHECK(h0.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h0.boundary_mass() < 1e-12);
  CHECK(h0.spectral_edge_mass() < 1e-12);
  const auto h1 = hermite_function(g, 1);
  CHECK(std::abs(h0.inner(h1)) < 1e-12);
  const auto far = WaveFunction::sample(g, [](double x) { return std::exp(-(x - 9.0) * (x - 9.0)); });
  CHECK(far.boundary_mass() > 0.99);
}
