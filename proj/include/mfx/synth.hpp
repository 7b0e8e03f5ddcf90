#pragma once

#include "mfx/series.hpp"

#include <string>
#include <vector>

namespace mfx::synth {

struct CascadeParams {
  int k = 16;       // length 2^k
  double a = 0.75;  // multiplier, 0.5 < a < 1
};

// Deterministic binomial measure on 2^k cells: cell i holds
// a^{n1(i)} (1 - a)^{k - n1(i)}, n1(i) = number of ones in i.
TimeSeries binomial_cascade(const CascadeParams& p);

// Closed-form multifractal quantities of the cascade series.
struct CascadeOracle {
  double a;

  double tau(double q) const;    // -ln(a^q + (1-a)^q) / ln 2
  double hurst(double q) const;  // (tau + 1) / q, continuous at q = 0
  double alpha(double q) const;  // d tau / dq
  double f(double q) const;      // q alpha - tau
  double alpha_min() const;      // -ln a / ln 2
  double alpha_max() const;      // -ln(1 - a) / ln 2
  double asymptotic_width() const;  // log2(a / (1 - a))
};

double cascade_hurst_oracle(double q, double a);

struct FgnParams {
  std::size_t n = 65536;
  double hurst = 0.5;
  RandomSeed seed{};
};

// Fractional Gaussian noise by spectral synthesis: complex Gaussian
// coefficients shaped by |f|^(1 - 2H) on a grid of length 2n, inverse
// transformed, the first n samples kept and standardized.
TimeSeries fgn(const FgnParams& p);

TimeSeries white_noise(std::size_t n, RandomSeed seed, double sample_rate_hz = 1.0);

// amplitude * cos(2 pi f t): a sinusoid whose first sample sits on its peak.
TimeSeries tone(double freq_hz, double sample_rate_hz, double duration_s, double amplitude = 1.0);

struct SyntheticEegParams {
  std::vector<std::string> channels;
  double duration_s = 760.0;
  double sample_rate_hz = 256.0;
  RandomSeed seed{};
};

// Multichannel EEG-like fixture: long-range correlated background plus
// theta/alpha/gamma band noise with log-normal amplitude modulation.
std::vector<TimeSeries> synthetic_eeg(const SyntheticEegParams& p);

}  // namespace mfx::synth
