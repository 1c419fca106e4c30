#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace stqc {

using complex = std::complex<double>;

/// Periodic box [-L, L) sampled with n points per axis.
///
/// Wavenumbers are stored in FFT order: index j carries m = j for j < n/2 and
/// m = j - n otherwise, so the Nyquist index n/2 sits on the negative side
/// (m = -n/2). k_j = (pi / L) m_j.
class Grid {
 public:
  Grid(std::size_t n_points, double half_width, int dim = 1);

  static std::shared_ptr<const Grid> make(std::size_t n_points, double half_width, int dim = 1) {
    return std::make_shared<const Grid>(n_points, half_width, dim);
  }

  int dim() const { return dim_; }
  std::size_t size() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  double x(std::size_t j) const { return x_[j]; }
  double k(std::size_t j) const { return k_[j]; }
  /// Largest representable |k|, i.e. the Nyquist wavenumber pi n / (2L).
  double k_nyquist() const;
  /// Integer frequency index m for FFT-ordered slot j.
  long frequency_index(std::size_t j) const;

  std::span<const double> positions() const { return x_; }
  std::span<const double> wavenumbers() const { return k_; }
  std::span<const double> wavenumbers_squared() const { return k2_; }

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_ && dim_ == other.dim_;
  }

 private:
  std::size_t n_;
  double half_width_;
  int dim_;
  double spacing_;
  std::vector<double> x_;
  std::vector<double> k_;
  std::vector<double> k2_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Complex amplitudes on a Grid. Operations in this library return new states.
class WaveFunction {
 public:
  explicit WaveFunction(GridPtr grid);
  WaveFunction(GridPtr grid, std::vector<complex> values);

  template <class F>
  static WaveFunction sample(GridPtr grid, F&& f) {
    std::vector<complex> v(grid->size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid->x(j));
    return WaveFunction(std::move(grid), std::move(v));
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<const complex> values() const { return values_; }
  std::span<complex> values() { return values_; }
  complex operator[](std::size_t j) const { return values_[j]; }
  complex& operator[](std::size_t j) { return values_[j]; }

  /// Discrete L2 norm (h sum |psi_j|^2)^(1/2).
  double norm() const;
  /// Fraction of |psi|^2 carried by points with |x| > L/2.
  double boundary_mass() const;
  /// Fraction of the spectral mass with |k| > k_nyquist / 2.
  double spectral_edge_mass() const;

  WaveFunction normalized() const;
  WaveFunction conjugated() const;
  WaveFunction scaled(complex c) const;

  /// <this, other> = h sum conj(this_j) other_j.
  complex inner(const WaveFunction& other) const;
  /// ||this - other||.
  double distance(const WaveFunction& other) const;

 private:
  GridPtr grid_;
  std::vector<complex> values_;
};

/// ||a - b|| / ||b||.
double relative_distance(const WaveFunction& a, const WaveFunction& b);

}  // namespace stqc
