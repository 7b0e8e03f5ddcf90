#pragma once

#include "mfx/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mfx {

struct ImfSet {
  std::vector<TimeSeries> imfs;  // fastest oscillation first
  TimeSeries residue;

  TimeSeries reconstruct() const;
};

struct EmdOptions {
  std::size_t max_imfs = 10;
  double sift_threshold = 0.3;  // sum (h_prev - h)^2 / sum h_prev^2
  int max_sifts = 10;
};

inline constexpr std::size_t kEmdMinLength = 64;

// Natural cubic spline through (x, y), x strictly increasing, evaluated at
// 0, 1, ..., n - 1.
std::vector<double> natural_cubic_spline(std::span<const double> x, std::span<const double> y,
                                         std::size_t n);

struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

Extrema find_extrema(std::span<const double> x);

ImfSet emd(const TimeSeries& ts, const EmdOptions& options = {});
inline ImfSet emd(const TimeSeries& ts, std::size_t max_imfs) {
  EmdOptions o;
  o.max_imfs = max_imfs;
  return emd(ts, o);
}

// Input minus the listed IMFs (1-based, 1 = fastest).
TimeSeries emd_denoise(const TimeSeries& ts, std::span<const std::size_t> drop_imfs,
                       const EmdOptions& options = {});
TimeSeries emd_denoise(const ImfSet& set, const TimeSeries& ts,
                       std::span<const std::size_t> drop_imfs);

}  // namespace mfx
