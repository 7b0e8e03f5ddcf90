#include "mfx/decompose.hpp"

#include "mfx/fft.hpp"
#include "mfx/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace mfx {
namespace {

constexpr std::size_t kMinFilterLength = 16;

// Edges closer than this (Hz) to Nyquist count as reaching it.
constexpr double kEdgeSlackHz = 1e-9;

void apply_mask(std::vector<fft::Complex>& half, const BandSpec& band, std::size_t n, double fs) {
  for (std::size_t k = 0; k < half.size(); ++k) {
    if (!band.contains(fft::bin_frequency(k, n, fs), fs)) half[k] = {0.0, 0.0};
  }
}

}  // namespace

double BandSpec::upper_edge(double sample_rate_hz) const noexcept {
  return open_ended() ? 0.5 * sample_rate_hz : high_hz;
}

bool BandSpec::contains(double freq_hz, double sample_rate_hz) const noexcept {
  const double nyquist = 0.5 * sample_rate_hz;
  const double upper = upper_edge(sample_rate_hz);
  if (freq_hz < low_hz) return false;
  if (upper >= nyquist - kEdgeSlackHz) return freq_hz <= nyquist + kEdgeSlackHz;
  return freq_hz < upper;
}

const std::array<BandSpec, 5>& stimulus_bands() {
  static const std::array<BandSpec, 5> bands{{
      {50.0, 1000.0, "band1"},
      {1000.0, 2000.0, "band2"},
      {2000.0, 3000.0, "band3"},
      {3000.0, 4000.0, "band4"},
      {4000.0, BandSpec::kOpen, "band5"},
  }};
  return bands;
}

BandSpec sub_stimulus_band() { return {0.0, 50.0, "sub50"}; }

std::string rhythm_name(Rhythm r) {
  switch (r) {
    case Rhythm::Theta: return "theta";
    case Rhythm::Alpha: return "alpha";
    case Rhythm::Gamma: return "gamma";
  }
  return "unknown";
}

Rhythm parse_rhythm(const std::string& name) {
  if (name == "theta") return Rhythm::Theta;
  if (name == "alpha") return Rhythm::Alpha;
  if (name == "gamma") return Rhythm::Gamma;
  throw Error(Errc::InvalidArgument, "unknown rhythm '" + name + "'");
}

RhythmSpec default_rhythm(Rhythm r) {
  switch (r) {
    case Rhythm::Theta: return {r, {4.0, 7.0, "theta"}};
    case Rhythm::Alpha: return {r, {8.0, 13.0, "alpha"}};
    case Rhythm::Gamma: return {r, {13.0, 30.0, "gamma"}};
  }
  throw Error(Errc::InvalidArgument, "unknown rhythm");
}

std::vector<RhythmSpec> default_rhythms() {
  return {default_rhythm(Rhythm::Alpha), default_rhythm(Rhythm::Theta),
          default_rhythm(Rhythm::Gamma)};
}

std::string method_name(RhythmMethod m) { return m == RhythmMethod::Fft ? "fft" : "dwt"; }

RhythmMethod parse_method(const std::string& name) {
  if (name == "fft") return RhythmMethod::Fft;
  if (name == "dwt") return RhythmMethod::Dwt;
  throw Error(Errc::InvalidArgument, "unknown rhythm method '" + name + "' (expected fft or dwt)");
}

void validate_band(const BandSpec& band, double sample_rate_hz) {
  const double nyquist = 0.5 * sample_rate_hz;
  const auto describe = [&] {
    return "band '" + band.name + "' [" + std::to_string(band.low_hz) + ", " +
           (band.open_ended() ? std::string("Nyquist") : std::to_string(band.high_hz)) +
           "] Hz at fs = " + std::to_string(sample_rate_hz) + " Hz";
  };
  if (!(band.low_hz >= 0.0) || !(band.low_hz < nyquist)) {
    throw Error(Errc::BandOutOfRange, describe() + ": lower edge outside [0, Nyquist)");
  }
  if (!band.open_ended()) {
    if (!(band.high_hz > band.low_hz)) {
      throw Error(Errc::BandOutOfRange, describe() + ": upper edge must exceed lower edge");
    }
    if (band.high_hz > nyquist + kEdgeSlackHz) {
      throw Error(Errc::BandOutOfRange, describe() + ": upper edge above Nyquist");
    }
  }
}

TimeSeries fft_bandpass(const TimeSeries& ts, const BandSpec& band) {
  validate_band(band, ts.sample_rate_hz);
  if (ts.size() < kMinFilterLength) {
    throw Error(Errc::TooShort, "band-pass needs at least 16 samples");
  }
  auto half = fft::forward_real(ts.samples);
  apply_mask(half, band, ts.size(), ts.sample_rate_hz);
  return TimeSeries(fft::inverse_real(half, ts.size()), ts.sample_rate_hz);
}

std::array<TimeSeries, 5> split_bands(const TimeSeries& audio) {
  if (audio.sample_rate_hz < kMinSplitSampleRate) {
    throw Error(Errc::SampleRateTooLow,
                "sample rate " + std::to_string(audio.sample_rate_hz) +
                    " Hz leaves band5 (4 kHz and above) empty; need at least 10 kHz");
  }
  if (audio.size() < kMinFilterLength) {
    throw Error(Errc::TooShort, "band split needs at least 16 samples");
  }
  const auto spectrum = fft::forward_real(audio.samples);
  std::array<TimeSeries, 5> out;
  for (std::size_t b = 0; b < 5; ++b) {
    auto half = spectrum;
    apply_mask(half, stimulus_bands()[b], audio.size(), audio.sample_rate_hz);
    out[b] = TimeSeries(fft::inverse_real(half, audio.size()), audio.sample_rate_hz);
  }
  return out;
}

TimeSeries extract_rhythm(const TimeSeries& eeg, const RhythmSpec& rhythm, RhythmMethod method) {
  validate_band(rhythm.band, eeg.sample_rate_hz);
  if (method == RhythmMethod::Fft) return fft_bandpass(eeg, rhythm.band);

  // Dyadic detail level j covers [fs / 2^(j+1), fs / 2^j); take the level with
  // the largest overlap with the rhythm band.
  const double fs = eeg.sample_rate_hz;
  const double high = rhythm.band.upper_edge(fs);
  const std::size_t max_levels = max_dwt_levels(eeg.size());
  std::size_t best_level = 0;
  double best_overlap = 0.0;
  for (std::size_t j = 1; j <= max_levels; ++j) {
    const double top = fs / std::pow(2.0, static_cast<double>(j));
    const double bottom = 0.5 * top;
    const double overlap = std::min(top, high) - std::max(bottom, rhythm.band.low_hz);
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best_level = j;
    }
  }
  if (best_level == 0) {
    throw Error(Errc::TooManyLevels, "no dyadic level of a " + std::to_string(eeg.size()) +
                                         "-sample series overlaps band '" + rhythm.band.name +
                                         "'");
  }
  return reconstruct_detail(dwt(eeg, best_level), best_level);
}

TimeSeries envelope(const TimeSeries& ts) {
  const std::size_t n = ts.size();
  if (n == 0) return ts;
  const auto half = fft::forward_real(ts.samples);
  std::vector<fft::Complex> analytic(n, {0.0, 0.0});
  analytic[0] = half[0];
  const std::size_t positive_end = (n + 1) / 2;  // bins 1 .. positive_end - 1 are doubled
  for (std::size_t k = 1; k < positive_end; ++k) analytic[k] = 2.0 * half[k];
  if (n % 2 == 0) analytic[n / 2] = half[n / 2];
  const auto z = fft::inverse(analytic);
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(z[i]);
  return TimeSeries(std::move(mag), ts.sample_rate_hz);
}

TimeSeries normalize(const TimeSeries& audio, double target_rms) {
  if (!(target_rms > 0.0) || !std::isfinite(target_rms)) {
    throw Error(Errc::InvalidArgument, "target RMS must be positive");
  }
  const double current = rms(audio.samples);
  if (!(current > 0.0)) throw Error(Errc::SilentInput, "cannot normalize a silent signal");
  TimeSeries out = audio;
  const double gain = target_rms / current;
  for (double& v : out.samples) v *= gain;
  return out;
}

}  // namespace mfx
