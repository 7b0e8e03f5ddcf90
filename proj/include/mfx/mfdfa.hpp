#pragma once

#include "mfx/series.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mfx {

struct MfdfaConfig {
  int detrend_order = 1;
  // Empty means default_scales(N) at run time.
  std::vector<std::size_t> scales;
  // Empty means default_q_grid().
  std::vector<double> q_grid;
  bool bidirectional = false;
};

// -5 to +5 in steps of 0.25 (41 points).
std::vector<double> default_q_grid();

// `count` log-spaced integers from `min_scale` to floor(n / 4), deduplicated.
std::vector<std::size_t> default_scales(std::size_t n, std::size_t count = 19,
                                        std::size_t min_scale = 16);

std::size_t segment_count(std::size_t n, std::size_t s);

// Least-squares polynomial detrending within a segment of fixed length.
// The orthonormal basis of the (scaled) Vandermonde matrix is computed once
// per (s, m), so each segment costs O(s * (m + 1)).
class SegmentDetrender {
 public:
  SegmentDetrender(std::size_t s, int order);

  std::size_t length() const noexcept { return length_; }
  int order() const noexcept { return order_; }

  // Mean squared residual of the order-m fit, F^2(s, v).
  double mean_squared_residual(std::span<const double> segment) const;

 private:
  std::size_t length_;
  int order_;
  Eigen::MatrixXd basis_;  // s x (m + 1), orthonormal columns
};

// F^2(s, v) for the zero-based segment index `segment` in forward order.
double local_fluctuation(const ProfileSeries& profile, std::size_t s, std::size_t segment,
                         int order);

struct SegmentFluctuations {
  std::vector<std::size_t> scales;
  std::vector<std::vector<double>> f2;  // [scale][segment]
};

SegmentFluctuations segment_fluctuations(const ProfileSeries& profile, const MfdfaConfig& cfg);

struct FqEstimate {
  double log_fq = 0.0;  // natural log of Fq(s)
  std::size_t excluded = 0;
  bool negative_q_blowup = false;

  double value() const;
};

// Fq(s) for one scale. q = 0 uses the logarithmic average. Segments with
// numerically zero variance are excluded and counted.
FqEstimate fluctuation_at(std::span<const double> f2, double q);

struct FluctuationFunction {
  std::vector<std::size_t> scales;
  std::vector<double> q;
  std::vector<std::vector<double>> log_fq;  // [q][scale]
  std::size_t excluded_segments = 0;  // summed over scales, counted once per scale
  bool negative_q_blowup = false;
};

FluctuationFunction fluctuation_function(const SegmentFluctuations& flucts,
                                         std::span<const double> q_grid);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct HurstCurve {
  std::vector<double> q;
  std::vector<double> h;
  std::vector<double> r_squared;
  std::vector<double> stderr_;
  // Number of adjacent q pairs where h increases by more than 1e-6.
  std::size_t monotonicity_violations = 0;

  bool monotone() const noexcept { return monotonicity_violations == 0; }
  double at(double q_value) const;
};

HurstCurve hurst_exponents(const FluctuationFunction& fq);

struct MfdfaResult {
  MfdfaConfig config;  // resolved (scales and q grid filled in)
  std::size_t n_samples = 0;
  FluctuationFunction fq;
  HurstCurve hurst;
};

MfdfaResult run_mfdfa(const TimeSeries& ts, const MfdfaConfig& cfg);

nlohmann::json to_json(const MfdfaResult& result);
// One row per (q, s): q,scale,log_fq,fq
std::string to_csv(const MfdfaResult& result);

}  // namespace mfx
