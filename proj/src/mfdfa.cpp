#include "mfx/mfdfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace mfx {
namespace {

// F^2 at or below this fraction of the largest F^2 at the same scale is
// treated as an exactly detrended (zero-variance) segment.
constexpr double kZeroVarianceRelative = 1e-28;
constexpr double kBlowupFloor = 1e-300;
constexpr double kMonotoneSlack = 1e-6;

void require_strictly_increasing_scales(std::span<const std::size_t> scales) {
  if (scales.size() < 2) {
    throw Error(Errc::InsufficientScales, "at least 2 scales are required");
  }
  for (std::size_t i = 1; i < scales.size(); ++i) {
    if (scales[i] <= scales[i - 1]) {
      throw Error(Errc::InvalidArgument, "scales must be strictly increasing");
    }
  }
}

void require_strictly_increasing_q(std::span<const double> q) {
  if (q.empty()) throw Error(Errc::InvalidArgument, "q grid is empty");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!std::isfinite(q[i])) throw Error(Errc::NonFinite, "q grid contains a non-finite value");
    if (i > 0 && q[i] <= q[i - 1]) {
      throw Error(Errc::InvalidArgument, "q grid must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<double> default_q_grid() {
  std::vector<double> q;
  q.reserve(41);
  for (int i = -20; i <= 20; ++i) q.push_back(0.25 * i);
  return q;
}

std::vector<std::size_t> default_scales(std::size_t n, std::size_t count, std::size_t min_scale) {
  const std::size_t max_scale = n / 4;
  if (max_scale < min_scale) {
    throw Error(Errc::InsufficientData, "series of length " + std::to_string(n) +
                                            " is too short for minimum scale " +
                                            std::to_string(min_scale));
  }
  std::vector<std::size_t> scales;
  if (count < 2 || max_scale == min_scale) {
    scales.push_back(min_scale);
    if (max_scale > min_scale) scales.push_back(max_scale);
    return scales;
  }
  const double lo = std::log(static_cast<double>(min_scale));
  const double hi = std::log(static_cast<double>(max_scale));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    const auto s = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
    const std::size_t clamped = std::clamp(s, min_scale, max_scale);
    if (scales.empty() || clamped > scales.back()) scales.push_back(clamped);
  }
  return scales;
}

std::size_t segment_count(std::size_t n, std::size_t s) {
  if (s == 0) throw Error(Errc::InvalidArgument, "scale must be positive");
  if (s > n) {
    throw Error(Errc::ScaleTooLarge,
                "scale " + std::to_string(s) + " exceeds length " + std::to_string(n));
  }
  return n / s;
}

SegmentDetrender::SegmentDetrender(std::size_t s, int order) : length_(s), order_(order) {
  if (order < 1 || order > 3) throw Error(Errc::InvalidArgument, "detrend order must be 1, 2 or 3");
  if (s < static_cast<std::size_t>(order) + 2) {
    throw Error(Errc::DegenerateFit, "scale " + std::to_string(s) +
                                         " leaves no residual degrees of freedom at order " +
                                         std::to_string(order));
  }
  const auto rows = static_cast<Eigen::Index>(s);
  const auto cols = static_cast<Eigen::Index>(order + 1);
  Eigen::MatrixXd vandermonde(rows, cols);
  const double half = 0.5 * static_cast<double>(s - 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = (static_cast<double>(i) - half) / half;
    double p = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      vandermonde(i, j) = p;
      p *= x;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(vandermonde);
  basis_ = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

double SegmentDetrender::mean_squared_residual(std::span<const double> segment) const {
  if (segment.size() != length_) {
    throw Error(Errc::InvalidArgument, "segment length does not match detrender");
  }
  const Eigen::Map<const Eigen::VectorXd> y(segment.data(), static_cast<Eigen::Index>(length_));
  const Eigen::Index cols = basis_.cols();
  double coeffs[4];  // order <= 3
  for (Eigen::Index j = 0; j < cols; ++j) coeffs[j] = basis_.col(j).dot(y);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double fitted = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) fitted += basis_(i, j) * coeffs[j];
    const double r = y[i] - fitted;
    sum += r * r;
  }
  return sum / static_cast<double>(length_);
}

double local_fluctuation(const ProfileSeries& profile, std::size_t s, std::size_t segment,
                         int order) {
  const std::size_t ns = segment_count(profile.values.size(), s);
  if (segment >= ns) {
    throw Error(Errc::InvalidArgument, "segment index " + std::to_string(segment) +
                                           " out of range (" + std::to_string(ns) + ")");
  }
  const SegmentDetrender detrender(s, order);
  return detrender.mean_squared_residual(
      std::span<const double>(profile.values).subspan(segment * s, s));
}

SegmentFluctuations segment_fluctuations(const ProfileSeries& profile, const MfdfaConfig& cfg) {
  require_strictly_increasing_scales(cfg.scales);
  const std::size_t n = profile.values.size();
  const std::span<const double> y(profile.values);

  SegmentFluctuations out;
  out.scales = cfg.scales;
  out.f2.reserve(cfg.scales.size());
  for (std::size_t s : cfg.scales) {
    const std::size_t ns = segment_count(n, s);
    const SegmentDetrender detrender(s, cfg.detrend_order);
    std::vector<double> row;
    row.reserve(cfg.bidirectional ? 2 * ns : ns);
    for (std::size_t v = 0; v < ns; ++v) {
      row.push_back(detrender.mean_squared_residual(y.subspan(v * s, s)));
    }
    if (cfg.bidirectional) {
      for (std::size_t v = 0; v < ns; ++v) {
        row.push_back(detrender.mean_squared_residual(y.subspan(n - (v + 1) * s, s)));
      }
    }
    out.f2.push_back(std::move(row));
  }
  return out;
}

double FqEstimate::value() const { return std::exp(log_fq); }

FqEstimate fluctuation_at(std::span<const double> f2, double q) {
  FqEstimate est;
  double largest = 0.0;
  for (double v : f2) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(Errc::NonFinite, "segment fluctuation must be finite and non-negative");
    }
    largest = std::max(largest, v);
  }
  if (largest <= 0.0) {
    throw Error(Errc::AllSegmentsDegenerate, "every segment has zero variance");
  }

  const double cutoff = largest * kZeroVarianceRelative;
  std::vector<double> logs;
  logs.reserve(f2.size());
  for (double v : f2) {
    if (v <= cutoff) {
      ++est.excluded;
      continue;
    }
    if (q < 0.0 && v < kBlowupFloor) est.negative_q_blowup = true;
    logs.push_back(std::log(v));
  }
  const auto count = static_cast<double>(logs.size());

  if (q == 0.0) {
    est.log_fq = compensated_sum(logs) / (2.0 * count);
    return est;
  }

  // ln Fq = (1/q) * (logsumexp((q/2) ln F^2) - ln Ns), overflow-free for large |q|.
  const double half_q = 0.5 * q;
  double peak = -std::numeric_limits<double>::infinity();
  for (double l : logs) peak = std::max(peak, half_q * l);
  KahanSum acc;
  for (double l : logs) acc.add(std::exp(half_q * l - peak));
  est.log_fq = (peak + std::log(acc.value()) - std::log(count)) / q;
  return est;
}

FluctuationFunction fluctuation_function(const SegmentFluctuations& flucts,
                                         std::span<const double> q_grid) {
  require_strictly_increasing_q(q_grid);
  FluctuationFunction out;
  out.scales = flucts.scales;
  out.q.assign(q_grid.begin(), q_grid.end());
  out.log_fq.assign(q_grid.size(), std::vector<double>(flucts.scales.size(), 0.0));
  for (std::size_t si = 0; si < flucts.f2.size(); ++si) {
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
      const FqEstimate est = fluctuation_at(flucts.f2[si], q_grid[qi]);
      out.log_fq[qi][si] = est.log_fq;
      out.negative_q_blowup = out.negative_q_blowup || est.negative_q_blowup;
      if (qi == 0) out.excluded_segments += est.excluded;
    }
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::InvalidArgument, "fit_line: size mismatch");
  if (x.size() < 2) throw Error(Errc::InsufficientScales, "fit_line needs at least 2 points");
  const auto n = static_cast<double>(x.size());
  const double mx = compensated_sum(x) / n;
  const double my = compensated_sum(y) / n;
  KahanSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() <= 0.0) throw Error(Errc::InsufficientScales, "fit_line: x values coincide");

  LineFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  KahanSum ss_res;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res.add(r * r);
  }
  fit.r_squared = syy.value() > 0.0 ? std::clamp(1.0 - ss_res.value() / syy.value(), 0.0, 1.0) : 1.0;
  fit.slope_stderr =
      x.size() > 2 ? std::sqrt(ss_res.value() / (n - 2.0) / sxx.value()) : 0.0;
  return fit;
}

double HurstCurve::at(double q_value) const {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (std::fabs(q[i] - q_value) < 1e-12) return h[i];
  }
  throw Error(Errc::InvalidArgument, "q = " + std::to_string(q_value) + " is not on the grid");
}

HurstCurve hurst_exponents(const FluctuationFunction& fq) {
  if (fq.scales.size() < 2) throw Error(Errc::InsufficientScales, "need at least 2 scales");
  std::vector<double> log_s;
  log_s.reserve(fq.scales.size());
  for (std::size_t s : fq.scales) log_s.push_back(std::log(static_cast<double>(s)));

  HurstCurve curve;
  curve.q = fq.q;
  for (const auto& row : fq.log_fq) {
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(Errc::InsufficientScales, "non-finite Fq value");
    }
    const LineFit fit = fit_line(log_s, row);
    curve.h.push_back(fit.slope);
    curve.r_squared.push_back(fit.r_squared);
    curve.stderr_.push_back(fit.slope_stderr);
  }
  for (std::size_t i = 1; i < curve.h.size(); ++i) {
    if (curve.h[i] > curve.h[i - 1] + kMonotoneSlack) ++curve.monotonicity_violations;
  }
  return curve;
}

MfdfaResult run_mfdfa(const TimeSeries& ts, const MfdfaConfig& cfg) {
  if (ts.size() < 2) throw Error(Errc::EmptySeries, "MFDFA needs a non-empty series");
  require_finite(ts.samples);
  if (cfg.detrend_order < 1 || cfg.detrend_order > 3) {
    throw Error(Errc::InvalidArgument, "detrend order must be 1, 2 or 3");
  }

  MfdfaResult result;
  result.n_samples = ts.size();
  result.config = cfg;
  if (result.config.scales.empty()) result.config.scales = default_scales(ts.size());
  if (result.config.q_grid.empty()) result.config.q_grid = default_q_grid();
  require_strictly_increasing_scales(result.config.scales);
  require_strictly_increasing_q(result.config.q_grid);

  const std::size_t max_scale = result.config.scales.back();
  if (ts.size() < 4 * max_scale) {
    throw Error(Errc::InsufficientData, "series length " + std::to_string(ts.size()) +
                                            " is below 4 x max scale " +
                                            std::to_string(max_scale));
  }
  const auto min_scale = static_cast<std::size_t>(result.config.detrend_order) + 2;
  if (result.config.scales.front() < min_scale) {
    throw Error(Errc::DegenerateFit, "smallest scale must be at least order + 2");
  }

  const ProfileSeries prof = profile(ts);
  const SegmentFluctuations flucts = segment_fluctuations(prof, result.config);
  result.fq = fluctuation_function(flucts, result.config.q_grid);
  result.hurst = hurst_exponents(result.fq);
  return result;
}

nlohmann::json to_json(const MfdfaResult& result) {
  nlohmann::json j;
  j["scales"] = result.fq.scales;
  j["q"] = result.fq.q;
  j["log_fq"] = result.fq.log_fq;
  j["h"] = result.hurst.h;
  j["r2"] = result.hurst.r_squared;
  j["h_stderr"] = result.hurst.stderr_;
  j["detrend_order"] = result.config.detrend_order;
  j["bidirectional"] = result.config.bidirectional;
  j["n_samples"] = result.n_samples;
  j["excluded_segments"] = result.fq.excluded_segments;
  j["negative_q_blowup"] = result.fq.negative_q_blowup;
  j["h_monotone"] = result.hurst.monotone();
  return j;
}

std::string to_csv(const MfdfaResult& result) {
  std::ostringstream os;
  os.precision(17);
  os << "q,scale,log_fq,fq\n";
  for (std::size_t qi = 0; qi < result.fq.q.size(); ++qi) {
    for (std::size_t si = 0; si < result.fq.scales.size(); ++si) {
      const double l = result.fq.log_fq[qi][si];
      os << result.fq.q[qi] << ',' << result.fq.scales[si] << ',' << l << ',' << std::exp(l)
         << '\n';
    }
  }
  return os.str();
}

}  // namespace mfx
