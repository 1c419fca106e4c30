#include "stqc/states.hpp"

#include <cmath>
#include <numbers>

#include "stqc/errors.hpp"

namespace stqc {

WaveFunction hermite_function(const GridPtr& grid, int k) {
  if (k < 0) throw InvalidArgument("Hermite index must be >= 0");
  const double c0 = std::pow(std::numbers::pi, -0.25);
  return WaveFunction::sample(grid, [&](double x) -> complex {
    double prev = 0.0;
    double cur = c0 * std::exp(-0.5 * x * x);
    for (int j = 0; j < k; ++j) {
      const double next = std::sqrt(2.0 / (j + 1.0)) * x * cur - std::sqrt(j / (j + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  });
}

WaveFunction ground_gaussian(const GridPtr& grid) { return hermite_function(grid, 0); }

WaveFunction boosted_gaussian(const GridPtr& grid, double p) {
  const double c0 = std::pow(std::numbers::pi, -0.25);
  return WaveFunction::sample(
      grid, [&](double x) { return c0 * std::exp(-0.5 * x * x) * std::polar(1.0, p * x); });
}

WaveFunction two_hump(const GridPtr& grid, double center, double a) {
  return WaveFunction::sample(grid, [&](double x) -> complex {
           return std::exp(-a * (x - center) * (x - center)) +
                  std::exp(-a * (x + center) * (x + center));
         })
      .normalized();
}

WaveFunction random_smooth_state(const GridPtr& grid, std::mt19937_64& rng,
                                 const RandomStateOptions& o) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Term {
    double c, a, p;
    complex w;
  };
  std::vector<Term> terms;
  for (int i = 0; i < o.terms; ++i) {
    Term t;
    t.c = o.center_range * (2.0 * u(rng) - 1.0);
    t.a = o.min_a + (o.max_a - o.min_a) * u(rng);
    t.p = o.momentum_range * (2.0 * u(rng) - 1.0);
    t.w = std::polar(0.5 + u(rng), 2.0 * std::numbers::pi * u(rng));
    terms.push_back(t);
  }
  return WaveFunction::sample(grid,
                              [&](double x) {
                                complex s(0.0, 0.0);
                                for (const auto& t : terms)
                                  s += t.w * std::exp(-t.a * (x - t.c) * (x - t.c)) *
                                       std::polar(1.0, t.p * x);
                                return s;
                              })
      .normalized();
}

std::vector<WaveFunction> validation_panel(const GridPtr& grid) {
  return {ground_gaussian(grid), boosted_gaussian(grid, 2.0), two_hump(grid, 1.5, 1.0)};
}

}  // namespace stqc
