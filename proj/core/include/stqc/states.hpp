#pragma once

#include <cstdint>
#include <random>

#include "stqc/grid.hpp"

namespace stqc {

/// Hermite function h_k, eigenfunction of -Lap + x^2 with eigenvalue 2k + 1.
WaveFunction hermite_function(const GridPtr& grid, int k);

/// Ground state pi^{-1/4} e^{-x^2/2} of -Lap + x^2.
WaveFunction ground_gaussian(const GridPtr& grid);

/// Ground state boosted by e^{i p x}.
WaveFunction boosted_gaussian(const GridPtr& grid, double p);

/// Normalized sum of two Gaussians e^{-a (x -+ c)^2}.
WaveFunction two_hump(const GridPtr& grid, double center = 3.0, double a = 2.0);

/// Options for random smooth test states: a normalized superposition of
/// `terms` Gaussians with random centers, widths, momenta and coefficients.
struct RandomStateOptions {
  int terms = 3;
  double center_range = 1.5;
  double min_a = 0.5;
  double max_a = 1.5;
  double momentum_range = 1.5;
};

WaveFunction random_smooth_state(const GridPtr& grid, std::mt19937_64& rng,
                                 const RandomStateOptions& options = {});

/// Fixed validation panel: ground Gaussian, boosted Gaussian (p = 2), two-hump.
std::vector<WaveFunction> validation_panel(const GridPtr& grid);

}  // namespace stqc
