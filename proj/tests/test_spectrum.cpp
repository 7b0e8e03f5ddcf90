#include "oracles.hpp"

#include "mfx/error.hpp"
#include "mfx/mfdfa.hpp"
#include "mfx/spectrum.hpp"
#include "mfx/synth.hpp"

#include <doctest.h>

#include <cmath>

using namespace mfx;

namespace {

HurstCurve constant_curve(double h_value) {
  HurstCurve h;
  for (int i = -20; i <= 20; ++i) {
    h.q.push_back(0.25 * i);
    h.h.push_back(h_value);
    h.r_squared.push_back(1.0);
    h.stderr_.push_back(0.0);
  }
  return h;
}

SingularitySpectrum parabola(double a, double b, double alpha0) {
  SingularitySpectrum s;
  for (int i = -6; i <= 6; ++i) {
    const double d = 0.05 * i;
    s.points.push_back({static_cast<double>(i), alpha0 + d, a * d * d + b * d + 1.0});
  }
  return s;
}

// Dyadic scales from `smallest` to N/4. Below about s = 128 the detrended
// cascade profile has a finite-size crossover that lowers every h(q) by the
// same amount (0.045 when fitting from s = 16). The offset cancels in alpha
// and W but is multiplied by q in tau.
MfdfaResult cascade_run(std::size_t smallest = 16) {
  MfdfaConfig cfg;
  cfg.bidirectional = true;
  for (std::size_t s = smallest; s <= 16384; s *= 2) cfg.scales.push_back(s);
  return run_mfdfa(synth::binomial_cascade({16, 0.75}), cfg);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("tau from a constant h") {
    const auto t = scaling_exponents(constant_curve(0.5));
    for (std::size_t i = 0; i < t.q.size(); ++i) {
      if (t.q[i] == 2.0) CHECK(t.tau[i] == doctest::Approx(0.0));
      if (t.q[i] == 0.0) CHECK(t.tau[i] == -1.0);
    }
    const auto t2 = scaling_exponents(constant_curve(0.93));
    for (std::size_t i = 0; i < t2.q.size(); ++i) {
      if (t2.q[i] == 0.0) CHECK(t2.tau[i] == -1.0);
    }
  }

  TEST_CASE("monofractal h collapses the spectrum to one point") {
    const auto s = singularity_spectrum(constant_curve(0.7));
    for (const auto& p : s.points) {
      CHECK(p.alpha == doctest::Approx(0.7).epsilon(1e-14));
      CHECK(p.f == doctest::Approx(1.0).epsilon(1e-14));
    }
    const auto fit = fit_spectrum(s);
    CHECK(width(fit) == 0.0);
    CHECK(fit.monofractal_degenerate);
  }

  TEST_CASE("linear h(q) against the hand derivation") {
    // h = 1 - 0.05 q: alpha = h + q h' = 1 - 0.1 q, f = q (alpha - h) + 1 = 1 - 0.05 q^2.
    std::vector<double> q, h;
    for (int i = -20; i <= 20; ++i) {
      q.push_back(0.25 * i);
      h.push_back(1.0 - 0.05 * q.back());
    }
    const auto s = singularity_spectrum(q, h);
    for (const auto& p : s.points) {
      CHECK(p.alpha == doctest::Approx(1.0 - 0.1 * p.q).epsilon(1e-12));
      CHECK(p.f == doctest::Approx(1.0 - 0.05 * p.q * p.q).epsilon(1e-12));
      if (p.q == 2.0) {
        CHECK(p.alpha == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(p.f == doctest::Approx(0.8).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("too few q points") {
    CHECK_THROWS_AS(singularity_spectrum(std::vector<double>{1.0, 2.0}, std::vector<double>{0.5, 0.4}), Error);
  }

  TEST_CASE("exact parabolas give their closed-form widths") {
    const auto narrow = fit_spectrum(parabola(-4.0, 0.0, 1.0));
    CHECK(narrow.W == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(narrow.root_alpha_1 == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(narrow.root_alpha_2 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(width(narrow) == doctest::Approx(1.0).epsilon(1e-10));
    const auto wide = fit_spectrum(parabola(-1.0, 0.0, 0.7));
    CHECK(wide.W == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(wide.alpha0 == doctest::Approx(0.7));
    CHECK_FALSE(wide.non_concave);
  }

  TEST_CASE("skewed parabola keeps B") {
    // vertex at d = 0.01, so the largest sampled f is still the one at d = 0
    const auto fit = fit_spectrum(parabola(-2.0, 0.04, 1.0));
    CHECK(fit.A == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(fit.B == doctest::Approx(0.04).epsilon(1e-10));
    CHECK(fit.W == doctest::Approx(std::sqrt(0.0016 + 8.0) / 2.0).epsilon(1e-10));
  }

  TEST_CASE("convex points fall back to the raw alpha range") {
    const auto fit = fit_spectrum(parabola(3.0, 0.0, 1.0));
    CHECK(fit.non_concave);
    CHECK(fit.W == doctest::Approx(fit.alpha_max - fit.alpha_min));
  }

  TEST_CASE("two distinct alphas cannot define a width") {
    SingularitySpectrum s;
    s.points = {{-1.0, 0.5, 0.9}, {0.0, 0.5, 1.0}, {1.0, 0.8, 0.9}};
    try {
      fit_spectrum(s);
      FAIL("expected InsufficientQPoints");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InsufficientQPoints);
    }
  }

  TEST_CASE("cascade tau follows the closed form above the crossover") {
    const auto tau = scaling_exponents(cascade_run(128).hurst);
    for (std::size_t i = 0; i < tau.q.size(); ++i) {
      CHECK(std::fabs(tau.tau[i] - oracle::cascade_tau(tau.q[i], 0.75)) <= 0.1);
    }
  }

  TEST_CASE("cascade alpha and width follow the closed forms") {
    const auto r = cascade_run();
    const auto spec = singularity_spectrum(r.hurst);
    const double lo = -std::log(0.75) / std::log(2.0);
    const double hi = -std::log(0.25) / std::log(2.0);
    CHECK(lo == doctest::Approx(0.415).epsilon(1e-3));
    CHECK(hi == doctest::Approx(2.0));
    // alpha moves toward the limits as |q| grows
    CHECK(spec.points.front().alpha > spec.points[spec.points.size() / 2].alpha);
    CHECK(spec.points.back().alpha < spec.points[spec.points.size() / 2].alpha);
    CHECK(std::fabs(spec.points.back().alpha - lo) < std::fabs(spec.points[24].alpha - lo));
    const double grid_width = oracle::cascade_alpha(-5.0, 0.75) - oracle::cascade_alpha(5.0, 0.75);
    CHECK(grid_width == doctest::Approx(1.57).epsilon(0.01));
    CHECK(std::fabs(fit_spectrum(spec).W - grid_width) <= 0.25);
  }

  TEST_CASE("white noise width") {
    const auto r = run_mfdfa(synth::white_noise(65536, RandomSeed{1}), {});
    CHECK(fit_spectrum(singularity_spectrum(r.hurst)).W <= 0.3);
  }

  TEST_CASE("fit serialization") {
    const auto fit = fit_spectrum(parabola(-4.0, 0.0, 1.0));
    const auto j = to_json(fit);
    CHECK(j.at("W").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("C").get<double>() == 1.0);
    const std::string header = csv_header(fit);
    const std::string row = to_csv_row(fit);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  }
}
