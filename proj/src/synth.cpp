#include "mfx/synth.hpp"

#include "mfx/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace mfx::synth {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// splitmix64 finalizer; derives independent stream seeds from one seed.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Real series of length n with power spectrum `shape(f)` (f in cycles/sample),
// Gaussian coefficients drawn in bin order from `rng`.
template <typename Shape>
std::vector<double> shaped_noise(std::size_t n, Rng& rng, Shape shape) {
  std::vector<fft::Complex> spec(n / 2 + 1, {0.0, 0.0});
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    const double amp = std::sqrt(shape(f));
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    if (n % 2 == 0 && k == n / 2) {
      spec[k] = {amp * re, 0.0};
    } else {
      spec[k] = {amp * re * std::numbers::sqrt2 / 2.0, amp * im * std::numbers::sqrt2 / 2.0};
    }
  }
  return fft::inverse_real(spec, n);
}

void standardize(std::vector<double>& x) {
  const BasicStats st = basic_stats(TimeSeries(x, 1.0));
  const double sd = std::sqrt(st.variance);
  for (double& v : x) v = sd > 0.0 ? (v - st.mean) / sd : 0.0;
}

}  // namespace

TimeSeries binomial_cascade(const CascadeParams& p) {
  if (p.k < 1 || p.k > 24) throw Error(Errc::InvalidArgument, "cascade k must be in [1, 24]");
  if (!(p.a > 0.5 && p.a < 1.0)) {
    throw Error(Errc::InvalidArgument, "cascade multiplier must satisfy 0.5 < a < 1");
  }
  const std::size_t n = std::size_t{1} << p.k;
  // powers[j] = a^j (1 - a)^(k - j)
  std::vector<double> powers(static_cast<std::size_t>(p.k) + 1);
  for (int j = 0; j <= p.k; ++j) {
    powers[static_cast<std::size_t>(j)] = std::pow(p.a, j) * std::pow(1.0 - p.a, p.k - j);
  }
  std::vector<double> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    cells[i] = powers[static_cast<std::size_t>(std::popcount(i))];
  }
  return TimeSeries(std::move(cells), 1.0);
}

double CascadeOracle::tau(double q) const {
  return -std::log(std::pow(a, q) + std::pow(1.0 - a, q)) / kLn2;
}

double CascadeOracle::hurst(double q) const {
  if (q == 0.0) {
    // limit of (tau(q) + 1) / q, i.e. tau'(0)
    return -(std::log(a) + std::log(1.0 - a)) / (2.0 * kLn2);
  }
  return (tau(q) + 1.0) / q;
}

double CascadeOracle::alpha(double q) const {
  const double pa = std::pow(a, q);
  const double pb = std::pow(1.0 - a, q);
  return -(pa * std::log(a) + pb * std::log(1.0 - a)) / ((pa + pb) * kLn2);
}

double CascadeOracle::f(double q) const { return q * alpha(q) - tau(q); }

double CascadeOracle::alpha_min() const { return -std::log(a) / kLn2; }

double CascadeOracle::alpha_max() const { return -std::log(1.0 - a) / kLn2; }

double CascadeOracle::asymptotic_width() const { return std::log2(a / (1.0 - a)); }

double cascade_hurst_oracle(double q, double a) { return CascadeOracle{a}.hurst(q); }

TimeSeries fgn(const FgnParams& p) {
  if (p.n < 1024) throw Error(Errc::InvalidArgument, "fGn length must be at least 1024");
  if (!(p.hurst > 0.0 && p.hurst < 1.0)) {
    throw Error(Errc::InvalidArgument, "Hurst exponent must be in (0, 1)");
  }
  Rng rng(p.seed);
  const double exponent = 1.0 - 2.0 * p.hurst;
  auto full = shaped_noise(2 * p.n, rng, [exponent](double f) { return std::pow(f, exponent); });
  full.resize(p.n);
  standardize(full);
  return TimeSeries(std::move(full), 1.0);
}

TimeSeries white_noise(std::size_t n, RandomSeed seed, double sample_rate_hz) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.gaussian();
  return TimeSeries(std::move(x), sample_rate_hz);
}

TimeSeries tone(double freq_hz, double sample_rate_hz, double duration_s, double amplitude) {
  if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0)) {
    throw Error(Errc::InvalidArgument, "tone needs positive sample rate and duration");
  }
  if (!(freq_hz >= 0.0) || freq_hz >= 0.5 * sample_rate_hz) {
    throw Error(Errc::InvalidArgument, "tone frequency must be below Nyquist");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  std::vector<double> x(n);
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::cos(w * static_cast<double>(i));
  return TimeSeries(std::move(x), sample_rate_hz);
}

std::vector<TimeSeries> synthetic_eeg(const SyntheticEegParams& p) {
  const auto n = static_cast<std::size_t>(std::llround(p.duration_s * p.sample_rate_hz));
  if (n < 1024) throw Error(Errc::InvalidArgument, "synthetic EEG is too short");
  const double fs = p.sample_rate_hz;

  struct Component {
    double low_hz, high_hz, amplitude, modulation_depth;
  };
  constexpr Component kComponents[] = {
      {4.0, 7.0, 1.0, 0.6},    // theta
      {8.0, 13.0, 1.6, 0.8},   // alpha
      {13.0, 30.0, 0.5, 0.5},  // beta / gamma
  };

  std::vector<TimeSeries> out;
  out.reserve(p.channels.size());
  for (std::size_t c = 0; c < p.channels.size(); ++c) {
    Rng rng(RandomSeed{mix_seed(p.seed.value ^ mix_seed(c + 1))});
    auto x = shaped_noise(n, rng, [](double f) { return std::pow(f, -0.8); });
    standardize(x);
    for (const auto& comp : kComponents) {
      auto band = shaped_noise(n, rng, [&](double f) {
        const double hz = f * fs;
        return hz >= comp.low_hz && hz < comp.high_hz ? 1.0 : 0.0;
      });
      standardize(band);
      auto slow = shaped_noise(n, rng, [&](double f) {
        const double hz = f * fs;
        return hz > 0.0 && hz < 1.0 ? std::pow(hz, -1.0) : 0.0;
      });
      standardize(slow);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += comp.amplitude * std::exp(comp.modulation_depth * slow[i]) * band[i];
      }
    }
    for (double& v : x) v *= 10.0;  // microvolt-like scale
    out.emplace_back(std::move(x), fs);
  }
  return out;
}

}  // namespace mfx::synth
