#include "mfx/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace mfx {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ScaleTooLarge: return "ScaleTooLarge";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::AllSegmentsDegenerate: return "AllSegmentsDegenerate";
    case Errc::InsufficientScales: return "InsufficientScales";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::InsufficientQPoints: return "InsufficientQPoints";
    case Errc::BandOutOfRange: return "BandOutOfRange";
    case Errc::SampleRateTooLow: return "SampleRateTooLow";
    case Errc::TooManyLevels: return "TooManyLevels";
    case Errc::TooShort: return "TooShort";
    case Errc::BadImfIndex: return "BadImfIndex";
    case Errc::SilentInput: return "SilentInput";
    case Errc::RecordingTooShort: return "RecordingTooShort";
    case Errc::BadPart: return "BadPart";
    case Errc::NoSheets: return "NoSheets";
    case Errc::EmptyCell: return "EmptyCell";
    case Errc::EmptyReport: return "EmptyReport";
    case Errc::MissingChannel: return "MissingChannel";
    case Errc::ParseError: return "ParseError";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

TimeSeries::TimeSeries(std::vector<double> values, double rate_hz)
    : samples(std::move(values)), sample_rate_hz(rate_hz) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw Error(Errc::InvalidArgument, "sample rate must be positive and finite");
  }
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "Rng::below(0)");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

void KahanSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) noexcept {
  KahanSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(Errc::NonFinite, "sample " + std::to_string(i) + " is not finite");
    }
  }
}

ProfileSeries profile(const TimeSeries& ts) {
  if (ts.size() < 2) throw Error(Errc::EmptySeries, "profile needs at least 2 samples");
  require_finite(ts.samples);

  const double mean = compensated_sum(ts.samples) / static_cast<double>(ts.size());
  ProfileSeries out;
  out.source_length = ts.size();
  out.values.resize(ts.size());
  KahanSum running;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    running.add(ts.samples[i] - mean);
    out.values[i] = running.value();
  }
  return out;
}

TimeSeries shuffle(const TimeSeries& ts, RandomSeed seed) {
  if (ts.empty()) throw Error(Errc::EmptySeries, "cannot shuffle an empty series");
  TimeSeries out = ts;
  Rng rng(seed);
  for (std::size_t i = out.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(out.samples[i], out.samples[j]);
  }
  return out;
}

BasicStats basic_stats(const TimeSeries& ts) {
  if (ts.empty()) throw Error(Errc::EmptySeries, "basic_stats on empty series");
  const auto n = static_cast<double>(ts.size());
  BasicStats st;
  st.mean = compensated_sum(ts.samples) / n;
  KahanSum sq;
  for (double x : ts.samples) sq.add((x - st.mean) * (x - st.mean));
  st.variance = sq.value() / n;
  const auto [lo, hi] = std::minmax_element(ts.samples.begin(), ts.samples.end());
  st.min = *lo;
  st.max = *hi;
  return st;
}

double energy(std::span<const double> values) {
  KahanSum acc;
  for (double v : values) acc.add(v * v);
  return acc.value();
}

double rms(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::sqrt(energy(values) / static_cast<double>(values.size()));
}

}  // namespace mfx
