#include "oracles.hpp"

#include "mfx/error.hpp"
#include "mfx/mfdfa.hpp"
#include "mfx/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mfx;

namespace {

ProfileSeries raw_profile(std::vector<double> v) {
  const std::size_t n = v.size();
  return ProfileSeries{std::move(v), n};
}

// Fluctuation table with log Fq(s) = ln(prefactor) + h ln s at every q.
FluctuationFunction power_law_table(double prefactor, double h) {
  FluctuationFunction fq;
  fq.scales = {16, 32, 64, 128, 256, 512};
  fq.q = {-2.0, 0.0, 2.0};
  fq.log_fq.assign(fq.q.size(), {});
  for (auto& row : fq.log_fq) {
    for (std::size_t s : fq.scales) row.push_back(std::log(prefactor) + h * std::log(static_cast<double>(s)));
  }
  return fq;
}

}  // namespace

TEST_SUITE("mfdfa") {
  TEST_CASE("segment count truncates") {
    CHECK(segment_count(1000, 100) == 10);
    CHECK(segment_count(1050, 100) == 10);
    CHECK(segment_count(5120, 16) == 320);
    CHECK_THROWS_AS(segment_count(10, 11), Error);
  }

  TEST_CASE("default grids") {
    const auto q = default_q_grid();
    REQUIRE(q.size() == 41);
    CHECK(q.front() == -5.0);
    CHECK(q.back() == 5.0);
    CHECK(q[20] == 0.0);
    const auto s = default_scales(65536);
    CHECK(s.front() == 16);
    CHECK(s.back() == 16384);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
    CHECK_THROWS_AS(default_scales(60), Error);
  }

  TEST_CASE("linear segment has zero residual at m = 1") {
    std::vector<double> v(64);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 - 0.25 * static_cast<double>(i);
    const auto p = raw_profile(v);
    for (std::size_t seg = 0; seg < 4; ++seg) CHECK(local_fluctuation(p, 16, seg, 1) <= 1e-18);
  }

  TEST_CASE("constant segment has zero residual at every order") {
    const auto p = raw_profile(std::vector<double>(48, 2.5));
    for (int m = 1; m <= 3; ++m) CHECK(local_fluctuation(p, 16, 1, m) <= 1e-18);
  }

  TEST_CASE("squares segment matches the normal-equations oracle") {
    std::vector<double> v(16);
    for (std::size_t i = 0; i < 16; ++i) v[i] = static_cast<double>((i + 1) * (i + 1));
    const double got = local_fluctuation(raw_profile(v), 16, 0, 1);
    const double want = oracle::poly_fit_mse(v, 1);
    CHECK(std::fabs(got - want) <= 1e-9 * want);
  }

  TEST_CASE("higher orders agree with the oracle on a noisy segment") {
    const auto x = synth::white_noise(512, RandomSeed{4});
    const auto p = profile(x);
    for (int m = 1; m <= 3; ++m) {
      for (std::size_t seg = 0; seg < 4; ++seg) {
        const double got = local_fluctuation(p, 128, seg, m);
        const double want =
            oracle::poly_fit_mse(std::span<const double>(p.values).subspan(seg * 128, 128), m);
        CHECK(std::fabs(got - want) <= 1e-9 * want);
      }
    }
  }

  TEST_CASE("segment too short for the order") {
    CHECK_THROWS_AS(SegmentDetrender(3, 2), Error);
    CHECK_THROWS_AS(SegmentDetrender(16, 4), Error);
  }

  TEST_CASE("constant variances give the same Fq at every q") {
    const std::vector<double> f2(10, 4.0);
    for (double q : {-5.0, -1.0, 0.0, 0.5, 2.0, 5.0}) {
      CHECK(fluctuation_at(f2, q).value() == doctest::Approx(2.0).epsilon(1e-14));
    }
  }

  TEST_CASE("q = 2 is the RMS of the segment variances") {
    const std::vector<double> f2{0.5, 1.5, 2.0, 4.0};
    const double direct = std::sqrt((0.5 + 1.5 + 2.0 + 4.0) / 4.0);
    CHECK(fluctuation_at(f2, 2.0).value() == doctest::Approx(direct).epsilon(1e-14));
  }

  TEST_CASE("q = 0 uses the logarithmic average") {
    const std::vector<double> f2{1.0, std::exp(2.0)};
    CHECK(fluctuation_at(f2, 0.0).value() == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(fluctuation_at(f2, 0.0).value() == doctest::Approx(1.64872).epsilon(1e-5));
  }

  TEST_CASE("zero-variance segments are excluded and counted") {
    const std::vector<double> f2{0.0, 1.0, 1.0};
    const auto e = fluctuation_at(f2, -3.0);
    CHECK(std::isfinite(e.log_fq));
    CHECK(e.excluded == 1);
    CHECK(e.value() == doctest::Approx(1.0));
    CHECK_THROWS_AS(fluctuation_at(std::vector<double>{0.0, 0.0}, 2.0), Error);
  }

  TEST_CASE("exact power laws give exact slopes") {
    const auto half = hurst_exponents(power_law_table(1.0, 0.5));
    for (std::size_t i = 0; i < half.q.size(); ++i) {
      CHECK(std::fabs(half.h[i] - 0.5) <= 1e-12);
      CHECK(half.r_squared[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto scaled = hurst_exponents(power_law_table(3.0, 0.8));
    for (double h : scaled.h) CHECK(std::fabs(h - 0.8) <= 1e-12);
  }

  TEST_CASE("line fit matches the sums oracle") {
    const std::vector<double> x{0.1, 0.7, 1.3, 2.2, 3.9, 4.4};
    const std::vector<double> y{1.0, 1.9, 2.2, 3.8, 5.1, 6.3};
    const auto got = fit_line(x, y);
    const auto want = oracle::ols(x, y);
    CHECK(got.slope == doctest::Approx(want.slope).epsilon(1e-12));
    CHECK(got.intercept == doctest::Approx(want.intercept).epsilon(1e-12));
  }

  TEST_CASE("input shorter than four times the largest scale") {
    MfdfaConfig cfg;
    cfg.scales = {16, 32, 64};
    const auto x = synth::white_noise(255, RandomSeed{1});
    try {
      run_mfdfa(x, cfg);
      FAIL("expected InsufficientData");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InsufficientData);
    }
  }

  TEST_CASE("q = 2 exponent equals plain DFA") {
    MfdfaConfig cfg;
    cfg.scales = {16, 24, 40, 64, 100, 160, 256};
    for (bool bidir : {false, true}) {
      cfg.bidirectional = bidir;
      const auto x = synth::fgn({4096, 0.7, RandomSeed{12}});
      const auto r = run_mfdfa(x, cfg);
      CHECK(std::fabs(r.hurst.at(2.0) - oracle::dfa_slope(x.samples, cfg.scales, 1, bidir)) <= 1e-9);
    }
  }

  TEST_CASE("cascade h(2) against the closed form") {
    MfdfaConfig cfg;
    cfg.bidirectional = true;
    for (std::size_t s = 16; s <= 16384; s *= 2) cfg.scales.push_back(s);
    const auto r = run_mfdfa(synth::binomial_cascade({16, 0.75}), cfg);
    CHECK(oracle::cascade_h(2.0, 0.75) == doctest::Approx(0.8390).epsilon(1e-4));
    CHECK(std::fabs(r.hurst.at(2.0) - oracle::cascade_h(2.0, 0.75)) <= 0.05);
  }

  TEST_CASE("white noise h(2) and monotone h(q)") {
    const auto r = run_mfdfa(synth::white_noise(65536, RandomSeed{1}), {});
    CHECK(std::fabs(r.hurst.at(2.0) - 0.5) <= 0.05);
    CHECK(r.hurst.q.size() == 41);
  }

  TEST_CASE("fGn H = 0.8 is monofractal") {
    const auto r = run_mfdfa(synth::fgn({65536, 0.8, RandomSeed{1}}), {});
    const double h2 = r.hurst.at(2.0);
    CHECK(std::fabs(h2 - 0.8) <= 0.05);
    for (double h : r.hurst.h) CHECK(std::fabs(h - h2) <= 0.15);
  }

  TEST_CASE("json and csv carry the resolved grid") {
    MfdfaConfig cfg;
    cfg.scales = {16, 32, 64};
    cfg.q_grid = {-1.0, 0.0, 1.0, 2.0};
    const auto r = run_mfdfa(synth::white_noise(1024, RandomSeed{2}), cfg);
    const auto j = to_json(r);
    CHECK(j.at("scales").size() == 3);
    CHECK(j.at("q").size() == 4);
    CHECK(j.at("h").size() == 4);
    const std::string csv = to_csv(r);
    CHECK(csv.rfind("q,scale,log_fq,fq\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 3);
  }
}
