#include "stqc/gaussian_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "stqc/errors.hpp"
#include "stqc/fft.hpp"

namespace stqc {
namespace {

struct Moments {
  double q, a, p, b;
};

// Moments of |psi|^2 and of the current Im(conj(psi) psi') on index range [lo, hi).
std::optional<Moments> moments(const Grid& g, std::span<const complex> psi,
                               std::span<const complex> dpsi, std::size_t lo, std::size_t hi) {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    const double r = std::norm(psi[j]);
    m0 += r;
    m1 += r * g.x(j);
  }
  if (!(m0 > 0.0)) return std::nullopt;
  const double q = m1 / m0;
  double var = 0.0, jsum = 0.0, jy = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    const double y = g.x(j) - q;
    const double r = std::norm(psi[j]);
    const double cur = (std::conj(psi[j]) * dpsi[j]).imag();
    var += r * y * y;
    jsum += cur;
    jy += cur * y;
  }
  var /= m0;
  if (!(var > 0.0)) return std::nullopt;
  return Moments{q, 1.0 / (4.0 * var), jsum / m0, -jy / (2.0 * var * m0)};
}

struct Fitter {
  const Grid& grid;
  std::span<const complex> psi;  // unit norm
  double h;

  // parameters: A_re, A_im, q, p, gamma_re, gamma_im
  using Vec = Eigen::Matrix<double, 6, 1>;

  static complex model(const Vec& v, double x) {
    const double y = x - v[2];
    const complex A(v[0], v[1]);
    const complex gamma(v[4], v[5]);
    return std::exp(-A * y * y + complex(0.0, v[3] * y) + complex(0.0, 1.0) * gamma);
  }

  double cost(const Vec& v) const {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) s += std::norm(model(v, grid.x(j)) - psi[j]);
    return s * h;
  }

  // choose gamma so that the model is the projection of psi on the ray
  void project_gamma(Vec& v) const {
    v[4] = 0.0;
    v[5] = 0.0;
    complex num(0.0, 0.0);
    double den = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const complex m = model(v, grid.x(j));
      num += std::conj(m) * psi[j];
      den += std::norm(m);
    }
    if (!(den > 0.0) || std::abs(num) == 0.0) return;
    const complex c = num / den;
    const complex gamma = complex(0.0, -1.0) * std::log(c);
    v[4] = gamma.real();
    v[5] = gamma.imag();
  }

  Vec solve(Vec v, int max_it) const {
    double lambda = 1e-3;
    double c = cost(v);
    for (int it = 0; it < max_it; ++it) {
      Eigen::Matrix<double, 6, 6> JtJ = Eigen::Matrix<double, 6, 6>::Zero();
      Vec Jtr = Vec::Zero();
      const complex A(v[0], v[1]);
      for (std::size_t j = 0; j < psi.size(); ++j) {
        const double y = grid.x(j) - v[2];
        const complex m = model(v, grid.x(j));
        const complex r = m - psi[j];
        const complex I(0.0, 1.0);
        const complex J[6] = {-y * y * m, -I * y * y * m, (2.0 * A * y - I * v[3]) * m,
                              I * y * m,  I * m,          -m};
        for (int a = 0; a < 6; ++a) {
          Jtr[a] += (std::conj(J[a]) * r).real();
          for (int b = a; b < 6; ++b) JtJ(a, b) += (std::conj(J[a]) * J[b]).real();
        }
      }
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < a; ++b) JtJ(a, b) = JtJ(b, a);
      bool improved = false;
      for (int tries = 0; tries < 30; ++tries) {
        Eigen::Matrix<double, 6, 6> M = JtJ;
        for (int a = 0; a < 6; ++a) M(a, a) += lambda * std::max(JtJ(a, a), 1e-300);
        Vec step = M.ldlt().solve(-Jtr);
        if (!step.allFinite()) {
          lambda *= 10.0;
          continue;
        }
        Vec trial = v + step;
        if (!(trial[0] > 0.0)) {
          lambda *= 10.0;
          continue;
        }
        const double ct = cost(trial);
        if (ct < c) {
          const double rel = (c - ct) / std::max(c, 1e-300);
          v = trial;
          c = ct;
          lambda = std::max(lambda / 10.0, 1e-12);
          improved = true;
          if (rel < 1e-14 || step.norm() < 1e-15 * (1.0 + v.norm())) return v;
          break;
        }
        lambda *= 10.0;
      }
      if (!improved) return v;
    }
    return v;
  }
};

}  // namespace

GaussianFit gaussian_fit(const WaveFunction& psi_in, const FitOptions& opt) {
  const double nrm = psi_in.norm();
  if (!(nrm >= 0.9 && nrm <= 1.1))
    throw InvalidArgument("gaussian_fit needs ||psi|| in [0.9, 1.1]");
  const WaveFunction psi = psi_in.scaled(1.0 / nrm);
  const Grid& g = psi.grid();
  const std::size_t n = g.size();

  // spectral derivative
  std::vector<complex> d(psi.values().begin(), psi.values().end());
  fft_forward(d);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = g.frequency_index(j) == -static_cast<long>(n / 2) ? 0.0 : g.k(j);
    d[j] *= complex(0.0, k * inv_n);
  }
  fft_backward(d);

  std::vector<Moments> starts;
  if (auto m = moments(g, psi.values(), d, 0, n)) starts.push_back(*m);

  // local peaks of |psi|, each with moments over its basin
  std::vector<double> amp(n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    amp[j] = std::abs(psi[j]);
    peak = std::max(peak, amp[j]);
  }
  std::vector<std::size_t> peaks;
  for (std::size_t j = 1; j + 1 < n; ++j)
    if (amp[j] >= amp[j - 1] && amp[j] > amp[j + 1] && amp[j] > 1e-2 * peak) peaks.push_back(j);
  std::sort(peaks.begin(), peaks.end(), [&](auto x, auto y) { return amp[x] > amp[y]; });
  if (peaks.size() > 4) peaks.resize(4);
  if (peaks.size() > 1) {
    for (auto j : peaks) {
      std::size_t lo = j, hi = j + 1;
      while (lo > 0 && amp[lo - 1] <= amp[lo] && amp[lo - 1] > 1e-3 * amp[j]) --lo;
      while (hi < n && amp[hi] <= amp[hi - 1] && amp[hi] > 1e-3 * amp[j]) ++hi;
      if (hi - lo >= 5)
        if (auto m = moments(g, psi.values(), d, lo, hi)) starts.push_back(*m);
    }
  }

  Fitter fitter{g, psi.values(), g.spacing()};
  std::vector<Fitter::Vec> initial;
  if (opt.hint) {
    const auto p = GaussianParams::from_state(*opt.hint);
    Fitter::Vec v;
    v << p.A.real(), p.A.imag(), p.q, p.p, 0.0, 0.0;
    initial.push_back(v);
  }
  for (const auto& m : starts) {
    if (!(m.a > 0.0) || !std::isfinite(m.a)) continue;
    Fitter::Vec v;
    v << m.a, m.b, m.q, m.p, 0.0, 0.0;
    initial.push_back(v);
  }

  double best_cost = std::numeric_limits<double>::infinity();
  Fitter::Vec best;
  for (auto v : initial) {
    fitter.project_gamma(v);
    v = fitter.solve(v, opt.max_iterations);
    if (!(v[0] > 0.0) || !v.allFinite()) continue;
    const double c = fitter.cost(v);
    if (c < best_cost) {
      best_cost = c;
      best = v;
    }
  }
  if (!std::isfinite(best_cost)) throw FitFailed("no Gaussian candidate with positive width");

  GaussianParams params;
  params.A = {best[0], best[1]};
  params.q = best[2];
  params.p = best[3];
  params.gamma = {best[4], best[5]};
  GaussianState state = params.to_state();

  // unit-norm member with the optimal global phase
  const auto unit = sample_gaussian(psi.grid_ptr(), state);
  const complex overlap = unit.inner(psi);
  state.theta = std::fmod(state.theta + std::arg(overlap) + 2.0 * std::numbers::pi,
                          2.0 * std::numbers::pi);
  const auto fit = sample_gaussian(psi.grid_ptr(), state);
  return GaussianFit{state, psi.distance(fit)};
}

}  // namespace stqc
