#include "mfx/wavelet.hpp"

#include <array>
#include <algorithm>
#include <bit>
#include <string>

namespace mfx {
namespace {

constexpr std::array<double, 8> kLowpass{
    0.23037781330885523,  0.7148465705525415,   0.6308807679295904,   -0.02798376941698385,
    -0.18703481171888114, 0.030841381835986965, 0.032883011666982945, -0.010597401784997278,
};

constexpr std::array<double, 8> make_highpass() {
  std::array<double, 8> g{};
  for (std::size_t n = 0; n < 8; ++n) g[n] = (n % 2 == 0 ? 1.0 : -1.0) * kLowpass[7 - n];
  return g;
}

constexpr std::array<double, 8> kHighpass = make_highpass();

void idwt_step(std::span<const double> approx, std::span<const double> detail,
               std::vector<double>& out) {
  const std::size_t half = approx.size();
  const std::size_t m = 2 * half;
  out.assign(m, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t n = 0; n < kLowpass.size(); ++n) {
      out[(2 * k + n) % m] += kLowpass[n] * approx[k] + kHighpass[n] * detail[k];
    }
  }
}

}  // namespace

std::span<const double> db4_lowpass() { return kLowpass; }
std::span<const double> db4_highpass() { return kHighpass; }

std::size_t max_dwt_levels(std::size_t n) {
  if (n < 8) return 0;
  return static_cast<std::size_t>(std::bit_width(n) - 1) - 2;
}

void dwt_step(std::span<const double> x, std::vector<double>& approx, std::vector<double>& detail) {
  const std::size_t m = x.size();
  const std::size_t half = m / 2;
  approx.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t n = 0; n < kLowpass.size(); ++n) {
      const double v = x[(2 * k + n) % m];
      a += kLowpass[n] * v;
      d += kHighpass[n] * v;
    }
    approx[k] = a;
    detail[k] = d;
  }
}

WaveletCoefficients dwt(const TimeSeries& ts, std::size_t levels) {
  if (levels == 0) throw Error(Errc::InvalidArgument, "DWT needs at least one level");
  const std::size_t limit = max_dwt_levels(ts.size());
  if (levels > limit) {
    throw Error(Errc::TooManyLevels, std::to_string(levels) + " levels requested, a " +
                                         std::to_string(ts.size()) + "-sample series allows " +
                                         std::to_string(limit));
  }
  WaveletCoefficients out;
  out.sample_rate_hz = ts.sample_rate_hz;
  std::vector<double> current = ts.samples;
  for (std::size_t level = 0; level < levels; ++level) {
    out.lengths.push_back(current.size());
    if (current.size() % 2 != 0) current.push_back(current.back());
    std::vector<double> approx;
    std::vector<double> detail;
    dwt_step(current, approx, detail);
    out.details.push_back(std::move(detail));
    current = std::move(approx);
  }
  out.approximation = std::move(current);
  return out;
}

TimeSeries idwt(const WaveletCoefficients& coeffs) {
  if (coeffs.details.size() != coeffs.lengths.size()) {
    throw Error(Errc::InvalidArgument, "wavelet coefficient levels and lengths disagree");
  }
  std::vector<double> current = coeffs.approximation;
  std::vector<double> next;
  for (std::size_t level = coeffs.levels(); level-- > 0;) {
    const auto& detail = coeffs.details[level];
    if (detail.size() != current.size()) {
      throw Error(Errc::InvalidArgument, "wavelet coefficient sizes are inconsistent");
    }
    idwt_step(current, detail, next);
    next.resize(coeffs.lengths[level]);
    current.swap(next);
  }
  return TimeSeries(std::move(current), coeffs.sample_rate_hz);
}

TimeSeries reconstruct_detail(const WaveletCoefficients& coeffs, std::size_t level) {
  if (level == 0 || level > coeffs.levels()) {
    throw Error(Errc::TooManyLevels, "detail level " + std::to_string(level) + " not present");
  }
  WaveletCoefficients only = coeffs;
  std::fill(only.approximation.begin(), only.approximation.end(), 0.0);
  for (std::size_t j = 0; j < only.levels(); ++j) {
    if (j + 1 != level) std::fill(only.details[j].begin(), only.details[j].end(), 0.0);
  }
  return idwt(only);
}

}  // namespace mfx
