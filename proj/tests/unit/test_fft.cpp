#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stqc/fft.hpp"

using namespace stqc;
using cd = std::complex<double>;

TEST_CASE("chirp-z matches the direct sum") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (std::size_t n : {5u, 16u, 33u}) {
    std::vector<cd> f(n);
    for (auto& v : f) v = {nd(rng), nd(rng)};
    for (double beta : {0.013, -0.37, 1.0 / n}) {
      const std::size_t m = n + 3;
      const auto fast = chirp_z(f, beta, m);
      for (std::size_t k = 0; k < m; ++k) {
        cd s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          s += f[j] * std::polar(1.0, 2.0 * std::numbers::pi * beta * double(j) * double(k));
        CHECK(std::abs(fast[k] - s) < 1e-11 * (1.0 + std::abs(s)));
      }
    }
  }
}

TEST_CASE("trigonometric resampling reproduces band-limited functions") {
  const std::size_t n = 64;
  const double z0 = -2.0, dz = 4.0 / n;
  auto f = [&](double z) {
    const double w = 2.0 * std::numbers::pi / (n * dz);
    return cd(std::cos(3 * w * (z - z0)), 0.5) * std::polar(1.0, -7 * w * (z - z0));
  };
  std::vector<cd> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = f(z0 + j * dz);
  const double w0 = -1.3, dw = 0.021;
  const auto r = resample_trigonometric(s, z0, dz, w0, dw);
  for (std::size_t m = 0; m < n; ++m) CHECK(std::abs(r[m] - f(w0 + m * dw)) < 1e-11);
}

TEST_CASE("forward and backward transforms invert up to n") {
  std::vector<cd> v(32);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = {std::sin(0.3 * j), std::cos(0.7 * j)};
  auto w = v;
  fft_forward(w);
  fft_backward(w);
  for (std::size_t j = 0; j < v.size(); ++j) CHECK(std::abs(w[j] / 32.0 - v[j]) < 1e-13);
}
