#pragma once

#include "mfx/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mfx {

// Daubechies-4 (8 taps) orthogonal low-pass analysis filter; the high-pass
// filter is its quadrature mirror g[n] = (-1)^n h[7 - n].
std::span<const double> db4_lowpass();
std::span<const double> db4_highpass();

// Periodized multilevel DWT. A level whose input has odd length is extended by
// repeating its last sample; the stored lengths undo that on synthesis.
struct WaveletCoefficients {
  std::vector<double> approximation;
  std::vector<std::vector<double>> details;  // details[0] is level 1 (finest)
  std::vector<std::size_t> lengths;          // input length at each level
  double sample_rate_hz = 1.0;

  std::size_t levels() const noexcept { return details.size(); }
};

std::size_t max_dwt_levels(std::size_t n);

WaveletCoefficients dwt(const TimeSeries& ts, std::size_t levels);
TimeSeries idwt(const WaveletCoefficients& coeffs);

// Single analysis step: approx[k] = sum_n h[n] x[(2k + n) mod N], likewise detail with g.
void dwt_step(std::span<const double> x, std::vector<double>& approx, std::vector<double>& detail);

// Reconstruction from one detail level only (all other coefficients zeroed).
TimeSeries reconstruct_detail(const WaveletCoefficients& coeffs, std::size_t level);

}  // namespace mfx
