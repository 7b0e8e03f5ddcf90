#pragma once

#include "mfx/mfdfa.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace mfx {

struct ScalingCurve {
  std::vector<double> q;
  std::vector<double> tau;
};

// tau(q) = q h(q) - 1
ScalingCurve scaling_exponents(const HurstCurve& h);

struct SpectrumPoint {
  double q = 0.0;
  double alpha = 0.0;
  double f = 0.0;
};

struct SingularitySpectrum {
  std::vector<SpectrumPoint> points;
};

// alpha = h + q h', f = q (alpha - h) + 1. h' uses central differences on
// the interior of the q grid and one-sided differences at its ends.
SingularitySpectrum singularity_spectrum(std::span<const double> q, std::span<const double> h);
SingularitySpectrum singularity_spectrum(const HurstCurve& h);

// f(alpha) ~ A (alpha - alpha0)^2 + B (alpha - alpha0) + 1, alpha0 pinned at
// the observed maximum of f, A and B by unweighted least squares.
struct SpectrumFit {
  double A = 0.0;
  double B = 0.0;
  double C = 1.0;
  double alpha0 = 0.0;
  double W = 0.0;
  double root_alpha_1 = 0.0;  // larger zero crossing
  double root_alpha_2 = 0.0;  // smaller zero crossing
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool non_concave = false;            // A >= 0: W falls back to alpha_max - alpha_min
  bool monofractal_degenerate = false;  // all alpha coincide: W = 0

  double raw_width() const noexcept { return alpha_max - alpha_min; }
};

SpectrumFit fit_spectrum(const SingularitySpectrum& spec);

double width(const SpectrumFit& fit);

nlohmann::json to_json(const SpectrumFit& fit);
std::string csv_header(const SpectrumFit&);
std::string to_csv_row(const SpectrumFit& fit);

}  // namespace mfx
