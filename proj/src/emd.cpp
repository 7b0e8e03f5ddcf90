#include "mfx/emd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfx {
namespace {

struct Knots {
  std::vector<double> t;
  std::vector<double> v;
};

// Extrema positions plus up to two mirror images across each end of the signal.
Knots mirrored_knots(std::span<const double> x, const std::vector<std::size_t>& idx) {
  Knots k;
  const double last = static_cast<double>(x.size() - 1);
  const std::size_t mirror = std::min<std::size_t>(2, idx.size());
  for (std::size_t i = mirror; i-- > 0;) {
    k.t.push_back(-static_cast<double>(idx[i]));
    k.v.push_back(x[idx[i]]);
  }
  for (std::size_t i : idx) {
    k.t.push_back(static_cast<double>(i));
    k.v.push_back(x[i]);
  }
  for (std::size_t i = 0; i < mirror; ++i) {
    const std::size_t j = idx[idx.size() - 1 - i];
    k.t.push_back(2.0 * last - static_cast<double>(j));
    k.v.push_back(x[j]);
  }
  return k;
}

}  // namespace

std::vector<double> natural_cubic_spline(std::span<const double> x, std::span<const double> y,
                                         std::size_t n) {
  const std::size_t m = x.size();
  if (m != y.size() || m < 2) throw Error(Errc::InvalidArgument, "spline needs >= 2 knots");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(x[i] > x[i - 1])) throw Error(Errc::InvalidArgument, "spline knots must increase");
  }

  // Second derivatives with natural end conditions, by the Thomas algorithm.
  std::vector<double> second(m, 0.0);
  if (m > 2) {
    std::vector<double> diag(m - 2), upper(m - 2), rhs(m - 2);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      diag[i - 1] = 2.0 * (h0 + h1);
      upper[i - 1] = h1;
      rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    for (std::size_t i = 1; i < m - 2; ++i) {
      const double lower = x[i + 1] - x[i];  // h_{i} multiplies M_{i} in row i + 1
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = m - 2; i-- > 0;) {
      const double next = i + 1 < m - 2 ? second[i + 2] : 0.0;
      second[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
    }
  }

  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    while (seg + 2 < m && t > x[seg + 1]) ++seg;
    const double h = x[seg + 1] - x[seg];
    const double a = (x[seg + 1] - t) / h;
    const double b = (t - x[seg]) / h;
    out[i] = a * y[seg] + b * y[seg + 1] +
             ((a * a * a - a) * second[seg] + (b * b * b - b) * second[seg + 1]) * h * h / 6.0;
  }
  return out;
}

Extrema find_extrema(std::span<const double> x) {
  Extrema e;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    // Collapse plateaus to their midpoint.
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (j + 1 >= n) break;
    const double before = x[i - 1];
    const double after = x[j + 1];
    if (x[i] > before && x[i] > after) e.maxima.push_back((i + j) / 2);
    if (x[i] < before && x[i] < after) e.minima.push_back((i + j) / 2);
    i = j + 1;
  }
  return e;
}

TimeSeries ImfSet::reconstruct() const {
  TimeSeries out = residue;
  for (const auto& imf : imfs) {
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += imf.samples[i];
  }
  return out;
}

ImfSet emd(const TimeSeries& ts, const EmdOptions& options) {
  if (ts.size() < kEmdMinLength) {
    throw Error(Errc::TooShort, "EMD needs at least " + std::to_string(kEmdMinLength) +
                                    " samples, got " + std::to_string(ts.size()));
  }
  require_finite(ts.samples);
  const std::size_t n = ts.size();

  ImfSet set;
  std::vector<double> residue = ts.samples;
  while (set.imfs.size() < options.max_imfs) {
    const Extrema start = find_extrema(residue);
    if (start.maxima.size() + start.minima.size() < 2 || start.maxima.empty() ||
        start.minima.empty()) {
      break;  // monotonic or a single extremum
    }

    std::vector<double> h = residue;
    for (int sift = 0; sift < options.max_sifts; ++sift) {
      const Extrema ex = find_extrema(h);
      if (ex.maxima.empty() || ex.minima.empty()) break;
      const Knots up = mirrored_knots(h, ex.maxima);
      const Knots lo = mirrored_knots(h, ex.minima);
      const auto upper = natural_cubic_spline(up.t, up.v, n);
      const auto lower = natural_cubic_spline(lo.t, lo.v, n);
      double change = 0.0;
      double base = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double mean = 0.5 * (upper[i] + lower[i]);
        change += mean * mean;
        base += h[i] * h[i];
        h[i] -= mean;
      }
      if (base == 0.0 || change / base < options.sift_threshold) break;
    }

    for (std::size_t i = 0; i < n; ++i) residue[i] -= h[i];
    set.imfs.emplace_back(std::move(h), ts.sample_rate_hz);
  }
  set.residue = TimeSeries(std::move(residue), ts.sample_rate_hz);
  return set;
}

TimeSeries emd_denoise(const ImfSet& set, const TimeSeries& ts,
                       std::span<const std::size_t> drop_imfs) {
  TimeSeries out = ts;
  for (std::size_t index : drop_imfs) {
    if (index < 1 || index > set.imfs.size()) {
      throw Error(Errc::BadImfIndex, "IMF " + std::to_string(index) + " requested, " +
                                         std::to_string(set.imfs.size()) + " available");
    }
    const auto& imf = set.imfs[index - 1].samples;
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] -= imf[i];
  }
  return out;
}

TimeSeries emd_denoise(const TimeSeries& ts, std::span<const std::size_t> drop_imfs,
                       const EmdOptions& options) {
  if (drop_imfs.empty()) return ts;
  return emd_denoise(emd(ts, options), ts, drop_imfs);
}

}  // namespace mfx
