#include "mfx/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mfx {
namespace {

// Alpha values closer than this (relative to their magnitude) count as one.
constexpr double kAlphaCoincide = 1e-12;

}  // namespace

ScalingCurve scaling_exponents(const HurstCurve& h) {
  ScalingCurve out;
  out.q = h.q;
  out.tau.reserve(h.q.size());
  for (std::size_t i = 0; i < h.q.size(); ++i) out.tau.push_back(h.q[i] * h.h[i] - 1.0);
  return out;
}

SingularitySpectrum singularity_spectrum(std::span<const double> q, std::span<const double> h) {
  if (q.size() != h.size()) throw Error(Errc::InvalidArgument, "q and h sizes differ");
  if (q.size() < 3) {
    throw Error(Errc::InsufficientQPoints, "singularity spectrum needs at least 3 q points");
  }
  const std::size_t n = q.size();
  SingularitySpectrum spec;
  spec.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double dh = (h[hi] - h[lo]) / (q[hi] - q[lo]);
    const double alpha = h[i] + q[i] * dh;
    spec.points.push_back({q[i], alpha, q[i] * (alpha - h[i]) + 1.0});
  }
  return spec;
}

SingularitySpectrum singularity_spectrum(const HurstCurve& h) {
  return singularity_spectrum(h.q, h.h);
}

SpectrumFit fit_spectrum(const SingularitySpectrum& spec) {
  const auto& pts = spec.points;
  if (pts.empty()) throw Error(Errc::InsufficientQPoints, "empty spectrum");
  for (const auto& p : pts) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.f)) {
      throw Error(Errc::NonFinite, "spectrum contains non-finite points");
    }
  }

  SpectrumFit fit;
  const auto [lo, hi] = std::minmax_element(
      pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
  fit.alpha_min = lo->alpha;
  fit.alpha_max = hi->alpha;

  std::vector<double> alphas;
  alphas.reserve(pts.size());
  for (const auto& p : pts) alphas.push_back(p.alpha);
  std::sort(alphas.begin(), alphas.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    const double tol = kAlphaCoincide * std::max(1.0, std::fabs(alphas[i]));
    if (alphas[i] - alphas[i - 1] > tol) ++distinct;
  }

  // Peak of the observed spectrum; ties resolve to the smaller alpha.
  const SpectrumPoint* peak = &pts.front();
  for (const auto& p : pts) {
    if (p.f > peak->f || (p.f == peak->f && p.alpha < peak->alpha)) peak = &p;
  }
  fit.alpha0 = peak->alpha;

  if (distinct == 1) {
    fit.monofractal_degenerate = true;
    fit.root_alpha_1 = fit.root_alpha_2 = fit.alpha0;
    fit.W = 0.0;
    return fit;
  }
  if (distinct < 3) {
    throw Error(Errc::InsufficientQPoints, "quadratic fit needs at least 3 distinct alpha values");
  }

  // Normal equations for (A, B) with C pinned to 1:
  //   [S4 S3] [A]   [S2y]
  //   [S3 S2] [B] = [S1y],  d = alpha - alpha0, y = f - 1
  KahanSum s2, s3, s4, s1y, s2y;
  for (const auto& p : pts) {
    const double d = p.alpha - fit.alpha0;
    const double y = p.f - 1.0;
    const double d2 = d * d;
    s2.add(d2);
    s3.add(d2 * d);
    s4.add(d2 * d2);
    s1y.add(d * y);
    s2y.add(d2 * y);
  }
  const double det = s4.value() * s2.value() - s3.value() * s3.value();
  if (!(std::fabs(det) > 0.0)) {
    throw Error(Errc::DegenerateFit, "singular normal equations in spectrum fit");
  }
  fit.A = (s2y.value() * s2.value() - s3.value() * s1y.value()) / det;
  fit.B = (s4.value() * s1y.value() - s3.value() * s2y.value()) / det;

  if (fit.A >= 0.0) {
    fit.non_concave = true;
    fit.root_alpha_1 = fit.alpha_max;
    fit.root_alpha_2 = fit.alpha_min;
    fit.W = fit.raw_width();
    return fit;
  }
  // Roots of A d^2 + B d + 1; the discriminant B^2 - 4A is positive for A < 0.
  const double disc = std::sqrt(fit.B * fit.B - 4.0 * fit.A);
  const double d_plus = (-fit.B - disc) / (2.0 * fit.A);
  const double d_minus = (-fit.B + disc) / (2.0 * fit.A);
  fit.root_alpha_1 = fit.alpha0 + std::max(d_plus, d_minus);
  fit.root_alpha_2 = fit.alpha0 + std::min(d_plus, d_minus);
  fit.W = disc / (-fit.A);
  return fit;
}

double width(const SpectrumFit& fit) { return fit.W; }

nlohmann::json to_json(const SpectrumFit& fit) {
  return nlohmann::json{{"A", fit.A},
                        {"B", fit.B},
                        {"C", fit.C},
                        {"alpha0", fit.alpha0},
                        {"W", fit.W},
                        {"alpha_1", fit.root_alpha_1},
                        {"alpha_2", fit.root_alpha_2},
                        {"alpha_min", fit.alpha_min},
                        {"alpha_max", fit.alpha_max},
                        {"raw_width", fit.raw_width()},
                        {"non_concave", fit.non_concave},
                        {"monofractal_degenerate", fit.monofractal_degenerate}};
}

std::string csv_header(const SpectrumFit&) {
  return "A,B,C,alpha0,W,alpha_1,alpha_2,raw_width,non_concave,monofractal_degenerate";
}

std::string to_csv_row(const SpectrumFit& fit) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%d,%d", fit.A, fit.B,
                fit.C, fit.alpha0, fit.W, fit.root_alpha_1, fit.root_alpha_2, fit.raw_width(),
                fit.non_concave ? 1 : 0, fit.monofractal_degenerate ? 1 : 0);
  return buf;
}

}  // namespace mfx
