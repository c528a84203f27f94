#pragma once

// Thin RAII wrapper over FFTW for in-process complex transforms.

#include <complex>
#include <cstddef>
#include <vector>

namespace ringing::detail {

// Unnormalized DFT: forward uses exp(-2 pi i jk/N), backward exp(+2 pi i jk/N).
void fft_forward(std::vector<std::complex<double>>& data);
void fft_backward(std::vector<std::complex<double>>& data);

// Signed angular frequency of DFT bin k for N samples spaced dt.
inline double bin_frequency(std::size_t k, std::size_t n, double dt) {
  const double two_pi = 6.283185307179586476925;
  const auto signed_k = k < (n + 1) / 2 ? static_cast<double>(k)
                                        : static_cast<double>(k) - static_cast<double>(n);
  return two_pi * signed_k / (static_cast<double>(n) * dt);
}

}  // namespace ringing::detail
