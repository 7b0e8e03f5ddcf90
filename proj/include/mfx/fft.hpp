#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin wrapper over FFTW. Plans are created per call with FFTW_ESTIMATE on
// fftw_malloc'd buffers (fixed alignment, so the chosen codelets and hence the
// results are reproducible). Planning is serialized by a global mutex; the
// transforms themselves run concurrently.
namespace mfx::fft {

using Complex = std::complex<double>;

// Half spectrum of a real signal: n/2 + 1 bins.
std::vector<Complex> forward_real(std::span<const double> x);

// Inverse of forward_real, normalized by 1/n.
std::vector<double> inverse_real(std::span<const Complex> half_spectrum, std::size_t n);

// Full complex transforms; inverse is normalized by 1/n.
std::vector<Complex> forward(std::span<const Complex> x);
std::vector<Complex> inverse(std::span<const Complex> x);

// Frequency in Hz of half-spectrum bin k for length n at rate fs.
inline double bin_frequency(std::size_t k, std::size_t n, double fs) {
  return static_cast<double>(k) * fs / static_cast<double>(n);
}

}  // namespace mfx::fft
