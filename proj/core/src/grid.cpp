#include "stqc/grid.hpp"

#include <cmath>
#include <numbers>

#include "stqc/errors.hpp"
#include "stqc/fft.hpp"

namespace stqc {

Grid::Grid(std::size_t n_points, double half_width, int dim)
    : n_(n_points), half_width_(half_width), dim_(dim) {
  if (dim != 1) throw InvalidArgument("only d = 1 grids are implemented");
  if (n_points < 8 || (n_points & (n_points - 1)) != 0)
    throw InvalidArgument("n_points must be a power of two >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("half_width must be positive");
  spacing_ = 2.0 * half_width / static_cast<double>(n_points);
  x_.resize(n_);
  k_.resize(n_);
  k2_.resize(n_);
  const double dk = std::numbers::pi / half_width;
  for (std::size_t j = 0; j < n_; ++j) {
    x_[j] = -half_width + static_cast<double>(j) * spacing_;
    k_[j] = dk * static_cast<double>(frequency_index(j));
    k2_[j] = k_[j] * k_[j];
  }
}

double Grid::k_nyquist() const {
  return std::numbers::pi / half_width_ * static_cast<double>(n_ / 2);
}

long Grid::frequency_index(std::size_t j) const {
  const long n = static_cast<long>(n_);
  const long jj = static_cast<long>(j);
  return jj < n / 2 ? jj : jj - n;
}

WaveFunction::WaveFunction(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}

WaveFunction::WaveFunction(GridPtr grid, std::vector<complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw InvalidArgument("value count does not match grid");
}

double WaveFunction::norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_->spacing());
}

double WaveFunction::boundary_mass() const {
  const double cut = 0.5 * grid_->half_width();
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double m = std::norm(values_[j]);
    total += m;
    if (std::abs(grid_->x(j)) > cut) outside += m;
  }
  return total > 0.0 ? outside / total : 0.0;
}

double WaveFunction::spectral_edge_mass() const {
  std::vector<complex> spec(values_.begin(), values_.end());
  fft_forward(spec);
  const double cut = 0.5 * grid_->k_nyquist();
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double m = std::norm(spec[j]);
    total += m;
    if (std::abs(grid_->k(j)) > cut) outside += m;
  }
  return total > 0.0 ? outside / total : 0.0;
}

WaveFunction WaveFunction::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero state");
  return scaled(1.0 / n);
}

WaveFunction WaveFunction::conjugated() const {
  WaveFunction out(*this);
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

WaveFunction WaveFunction::scaled(complex c) const {
  WaveFunction out(*this);
  for (auto& v : out.values_) v *= c;
  return out;
}

complex WaveFunction::inner(const WaveFunction& other) const {
  if (!(*grid_ == other.grid())) throw InvalidArgument("states live on different grids");
  complex s{0.0, 0.0};
  for (std::size_t j = 0; j < values_.size(); ++j) s += std::conj(values_[j]) * other.values_[j];
  return s * grid_->spacing();
}

double WaveFunction::distance(const WaveFunction& other) const {
  if (!(*grid_ == other.grid())) throw InvalidArgument("states live on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) s += std::norm(values_[j] - other.values_[j]);
  return std::sqrt(s * grid_->spacing());
}

double relative_distance(const WaveFunction& a, const WaveFunction& b) {
  return a.distance(b) / b.norm();
}

}  // namespace stqc
