#pragma once

#include "mfx/series.hpp"

#include <array>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mfx {

// Frequency band in Hz. Bins are kept when low_hz <= f < high_hz; a band whose
// upper edge reaches Nyquist (or is open-ended) also keeps the Nyquist bin.
// With this convention adjacent bands are disjoint and together exhaustive.
struct BandSpec {
  static constexpr double kOpen = std::numeric_limits<double>::infinity();

  double low_hz = 0.0;
  double high_hz = kOpen;  // kOpen: "and above", i.e. up to Nyquist
  std::string name;

  bool open_ended() const noexcept { return high_hz == kOpen; }
  double upper_edge(double sample_rate_hz) const noexcept;
  bool contains(double freq_hz, double sample_rate_hz) const noexcept;
};

// Band1 [50, 1000), Band2 [1000, 2000), Band3 [2000, 3000),
// Band4 [3000, 4000), Band5 [4000, Nyquist].
const std::array<BandSpec, 5>& stimulus_bands();
// [0, 50): content that belongs to no stimulus band.
BandSpec sub_stimulus_band();

constexpr double kMinSplitSampleRate = 10000.0;

enum class Rhythm { Theta, Alpha, Gamma };

struct RhythmSpec {
  Rhythm rhythm = Rhythm::Alpha;
  BandSpec band;
};

std::string rhythm_name(Rhythm r);
Rhythm parse_rhythm(const std::string& name);
// theta [4, 7), alpha [8, 13), gamma [13, 30)
RhythmSpec default_rhythm(Rhythm r);
std::vector<RhythmSpec> default_rhythms();

enum class RhythmMethod { Fft, Dwt };

std::string method_name(RhythmMethod m);
RhythmMethod parse_method(const std::string& name);

void validate_band(const BandSpec& band, double sample_rate_hz);

// Brick-wall band-pass: every bin outside the band is zeroed.
TimeSeries fft_bandpass(const TimeSeries& ts, const BandSpec& band);

// One forward transform, one inverse per stimulus band.
std::array<TimeSeries, 5> split_bands(const TimeSeries& audio);

TimeSeries extract_rhythm(const TimeSeries& eeg, const RhythmSpec& rhythm,
                          RhythmMethod method = RhythmMethod::Fft);

// Magnitude of the analytic signal.
TimeSeries envelope(const TimeSeries& ts);

// Scales to the requested RMS.
TimeSeries normalize(const TimeSeries& audio, double target_rms);

}  // namespace mfx
