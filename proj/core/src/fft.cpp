#include "stqc/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "stqc/errors.hpp"

namespace stqc {
namespace {

// fftw planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (p == nullptr) throw Error("fftw planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(std::span<std::complex<double>> data, int sign) {
  if (data.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(data.size(), sign), p, p);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) { execute(data, FFTW_FORWARD); }
void fft_backward(std::span<std::complex<double>> data) { execute(data, FFTW_BACKWARD); }

std::complex<double> exp_i_pi(long double t) {
  long double r = std::fmod(t, 2.0L);
  if (r > 1.0L) r -= 2.0L;
  if (r < -1.0L) r += 2.0L;
  const double ang = static_cast<double>(r * std::numbers::pi_v<long double>);
  return {std::cos(ang), std::sin(ang)};
}

std::vector<std::complex<double>> chirp_z(std::span<const std::complex<double>> f, double beta,
                                          std::size_t out_size) {
  const std::size_t n = f.size();
  const std::size_t m = out_size;
  if (n == 0 || m == 0) return std::vector<std::complex<double>>(m);
  const std::size_t p = next_pow2(n + m - 1);
  const long double lb = beta;

  // chirp w(k) = exp(i pi beta k^2)
  auto w = [lb](long k) {
    const long double kk = static_cast<long double>(k) * static_cast<long double>(k);
    return exp_i_pi(lb * kk);
  };

  std::vector<std::complex<double>> a(p), c(p);
  for (std::size_t j = 0; j < n; ++j) a[j] = f[j] * w(static_cast<long>(j));
  for (std::size_t k = 0; k < m; ++k) c[k] = std::conj(w(static_cast<long>(k)));
  for (std::size_t k = 1; k < n; ++k) c[p - k] = std::conj(w(static_cast<long>(k)));

  fft_forward(a);
  fft_forward(c);
  const double inv_p = 1.0 / static_cast<double>(p);
  for (std::size_t j = 0; j < p; ++j) a[j] *= c[j] * inv_p;
  fft_backward(a);

  std::vector<std::complex<double>> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = a[k] * w(static_cast<long>(k));
  return out;
}

std::vector<std::complex<double>> resample_trigonometric(std::span<const std::complex<double>> f,
                                                         double z0, double dz, double w0,
                                                         double dw) {
  const std::size_t n = f.size();
  std::vector<std::complex<double>> coeff(f.begin(), f.end());
  fft_forward(coeff);
  const long half = static_cast<long>(n / 2);
  const long double period = static_cast<long double>(n) * dz;
  const long double shift = (static_cast<long double>(w0) - z0) / period;

  // g_{kappa + n/2} = c_kappa exp(2 pi i kappa shift), kappa in [-n/2, n/2)
  std::vector<std::complex<double>> g(n);
  for (long kappa = -half; kappa < static_cast<long>(n) - half; ++kappa) {
    const std::size_t slot = static_cast<std::size_t>((kappa + static_cast<long>(n)) %
                                                      static_cast<long>(n));
    const auto phase = exp_i_pi(2.0L * kappa * shift);
    g[static_cast<std::size_t>(kappa + half)] = coeff[slot] * phase / static_cast<double>(n);
  }

  const double beta = static_cast<double>(static_cast<long double>(dw) / period);
  auto out = chirp_z(g, beta, n);
  // undo the index offset kappa = j' - n/2
  for (std::size_t m = 0; m < n; ++m)
    out[m] *= exp_i_pi(-2.0L * static_cast<long double>(half) * static_cast<long double>(m) *
                       static_cast<long double>(beta));
  return out;
}

}  // namespace stqc
