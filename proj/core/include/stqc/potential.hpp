#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "stqc/grid.hpp"

namespace stqc {

namespace potential {
struct Zero {};
/// c |x|^gamma; evaluated as c (|x|^2 + h^2)^{gamma/2} with h the grid spacing when gamma < 0.
struct AbsPower {
  double c = 1.0;
  double gamma = 1.0;
};
/// exp(a x^2 + b x) with a < 0.
struct GaussianExp {
  double a = -1.0;
  double b = 0.0;
};
/// Bounded function given by its grid samples.
struct BoundedSample {
  std::vector<double> values;
};
/// |x|^2.
struct QuadraticCtrl {};
/// x_j.
struct LinearCtrl {
  int axis = 0;
};
}  // namespace potential

using PotentialSpec = std::variant<potential::Zero, potential::AbsPower, potential::GaussianExp,
                                   potential::BoundedSample, potential::QuadraticCtrl,
                                   potential::LinearCtrl>;

/// Validates the invariants (AbsPower gamma > -1/2 in d = 1, GaussianExp a < 0);
/// throws InvalidArgument.
void validate_potential(const PotentialSpec& v, int dim = 1);

/// Samples the potential on the grid.
std::vector<double> sample_potential(const PotentialSpec& v, const Grid& grid);

bool is_zero(const PotentialSpec& v);

nlohmann::json potential_to_json(const PotentialSpec& v);
PotentialSpec potential_from_json(const nlohmann::json& j);

}  // namespace stqc
