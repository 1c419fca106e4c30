#pragma once

#include <complex>
#include <span>
#include <vector>

namespace stqc {

/// In-place unnormalized forward DFT, X_m = sum_j x_j exp(-2 pi i j m / n).
void fft_forward(std::span<std::complex<double>> data);
/// In-place unnormalized inverse DFT, x_j = sum_m X_m exp(+2 pi i j m / n).
void fft_backward(std::span<std::complex<double>> data);

/// Chirp-z transform F_m = sum_{j<n} f_j exp(2 pi i beta j m), m < out_size,
/// evaluated with Bluestein's convolution (any n, any real beta).
std::vector<std::complex<double>> chirp_z(std::span<const std::complex<double>> f, double beta,
                                          std::size_t out_size);

/// Evaluates the trigonometric interpolant of samples taken on the periodic
/// grid z_j = z0 + j dz (period n dz) at the n points w_m = w0 + m dw.
/// Frequencies are taken in [-n/2, n/2), Nyquist on the negative side.
std::vector<std::complex<double>> resample_trigonometric(std::span<const std::complex<double>> f,
                                                         double z0, double dz, double w0,
                                                         double dw);

/// exp(i pi t) with the argument reduced in extended precision first.
std::complex<double> exp_i_pi(long double t);

}  // namespace stqc
