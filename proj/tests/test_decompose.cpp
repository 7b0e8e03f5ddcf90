#include "oracles.hpp"

#include "mfx/decompose.hpp"
#include "mfx/emd.hpp"
#include "mfx/error.hpp"
#include "mfx/fft.hpp"
#include "mfx/series.hpp"
#include "mfx/synth.hpp"
#include "mfx/wav.hpp"
#include "mfx/wavelet.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mfx;

namespace {

constexpr double kPi = std::numbers::pi;

TimeSeries sine(double freq, double fs, double seconds, double amp = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(fs * seconds));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(2.0 * kPi * freq * static_cast<double>(i) / fs);
  return TimeSeries(std::move(v), fs);
}

TimeSeries add(const TimeSeries& a, const TimeSeries& b) {
  TimeSeries out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += b.samples[i];
  return out;
}

double rel_rms_error(std::span<const double> a, std::span<const double> b) {
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += static_cast<long double>(a[i]) * a[i];
  }
  return static_cast<double>(std::sqrt(num / den));
}

}  // namespace

TEST_SUITE("fft") {
  TEST_CASE("real transform matches a naive DFT") {
    for (std::size_t n : {7u, 16u, 45u}) {
      const auto x = synth::white_noise(n, RandomSeed{n});
      const auto got = fft::forward_real(x.samples);
      const auto want = oracle::naive_dft(x.samples);
      REQUIRE(got.size() == n / 2 + 1);
      for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-10);
    }
  }

  TEST_CASE("inverse undoes forward") {
    const auto x = synth::white_noise(1000, RandomSeed{8});
    const auto back = fft::inverse_real(fft::forward_real(x.samples), x.size());
    CHECK(rel_rms_error(x.samples, back) <= 1e-14);
    std::vector<fft::Complex> c(64);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = {std::sin(0.3 * i), std::cos(0.7 * i)};
    const auto cc = fft::inverse(fft::forward(c));
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(cc[i] - c[i]) <= 1e-13);
  }
}

TEST_SUITE("bands") {
  TEST_CASE("stimulus band edges") {
    const auto& b = stimulus_bands();
    CHECK(b[0].low_hz == 50.0);
    CHECK(b[0].high_hz == 1000.0);
    CHECK(b[2].low_hz == 2000.0);
    CHECK(b[2].high_hz == 3000.0);
    CHECK(b[4].low_hz == 4000.0);
    CHECK(b[4].open_ended());
    CHECK(b[1].contains(1000.0, 44100.0));
    CHECK_FALSE(b[0].contains(1000.0, 44100.0));
    CHECK(b[4].contains(22050.0, 44100.0));
  }

  TEST_CASE("tone inside the passband keeps its energy") {
    const auto x = sine(1500.0, 44100.0, 1.0);
    const auto y = fft_bandpass(x, stimulus_bands()[1]);
    CHECK(oracle::energy(y.samples) >= 0.99 * oracle::energy(x.samples));
  }

  TEST_CASE("tone outside the passband is rejected") {
    const auto x = sine(500.0, 44100.0, 1.0);
    const auto y = fft_bandpass(x, stimulus_bands()[1]);
    CHECK(oracle::energy(y.samples) <= 1e-6 * oracle::energy(x.samples));
  }

  TEST_CASE("two tones through one band") {
    const auto in_band = sine(1500.0, 44100.0, 1.0);
    const auto y = fft_bandpass(add(sine(500.0, 44100.0, 1.0), in_band), stimulus_bands()[1]);
    const double e = oracle::energy(y.samples);
    const double ref = oracle::energy(in_band.samples);
    CHECK(std::fabs(e - ref) <= 0.01 * ref);
  }

  TEST_CASE("split bands preserve length and rate") {
    const auto x = synth::white_noise(44100, RandomSeed{3}, 44100.0);
    const auto bands = split_bands(x);
    for (const auto& b : bands) {
      CHECK(b.size() == x.size());
      CHECK(b.sample_rate_hz == 44100.0);
    }
  }

  TEST_CASE("white noise band energy is proportional to bandwidth") {
    const double fs = 44100.0;
    const auto x = synth::white_noise(441000, RandomSeed{21}, fs);
    const auto bands = split_bands(x);
    const double total = oracle::energy(x.samples);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const auto& spec = stimulus_bands()[i];
      const double expected = (spec.upper_edge(fs) - spec.low_hz) / (fs / 2.0);
      const double got = oracle::energy(bands[i].samples) / total;
      CHECK(std::fabs(got / expected - 1.0) <= 0.05);
    }
  }

  TEST_CASE("pure 2500 Hz tone lands in band 3 only") {
    const auto x = sine(2500.0, 44100.0, 1.0);
    const auto bands = split_bands(x);
    const double total = oracle::energy(x.samples);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const double share = oracle::energy(bands[i].samples) / total;
      if (i == 2) {
        CHECK(share >= 0.99);
      } else {
        CHECK(share <= 1e-6);
      }
    }
  }

  TEST_CASE("DC and 10 Hz content appear in no band") {
    TimeSeries x = sine(10.0, 44100.0, 1.0);
    for (double& v : x.samples) v += 0.5;
    const auto bands = split_bands(x);
    const double total = oracle::energy(x.samples);
    for (const auto& b : bands) CHECK(oracle::energy(b.samples) <= 1e-6 * total);
  }

  TEST_CASE("bands plus the sub-50 Hz remainder partition the energy") {
    const double fs = 44100.0;
    const auto x = synth::white_noise(44100, RandomSeed{5}, fs);
    const auto bands = split_bands(x);
    double sum = oracle::energy(fft_bandpass(x, sub_stimulus_band()).samples);
    for (const auto& b : bands) sum += oracle::energy(b.samples);
    const double total = oracle::energy(x.samples);
    CHECK(std::fabs(sum - total) <= 1e-6 * total);
  }

  TEST_CASE("low sample rates cannot be split") {
    try {
      split_bands(synth::white_noise(8000, RandomSeed{1}, 8000.0));
      FAIL("expected SampleRateTooLow");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SampleRateTooLow);
    }
  }

  TEST_CASE("band above Nyquist is rejected") {
    CHECK_THROWS_AS(fft_bandpass(sine(10.0, 256.0, 1.0), BandSpec{200.0, 300.0, "x"}), Error);
  }
}

TEST_SUITE("rhythms") {
  TEST_CASE("10 Hz passes alpha and not theta") {
    const auto x = sine(10.0, 256.0, 8.0);
    const double e = oracle::energy(x.samples);
    CHECK(oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Alpha)).samples) >= 0.99 * e);
    CHECK(oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Theta)).samples) <= 1e-6 * e);
  }

  TEST_CASE("6 Hz passes theta and not alpha") {
    const auto x = sine(6.0, 256.0, 8.0);
    const double e = oracle::energy(x.samples);
    CHECK(oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Theta)).samples) >= 0.99 * e);
    CHECK(oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Alpha)).samples) <= 1e-6 * e);
  }

  TEST_CASE("alpha share of white noise") {
    const auto x = synth::white_noise(256 * 60, RandomSeed{6}, 256.0);
    const double share = oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Alpha)).samples) /
                         oracle::energy(x.samples);
    CHECK(std::fabs(share / (5.0 / 128.0) - 1.0) <= 0.10);
  }

  TEST_CASE("wavelet extraction keeps the matching dyadic level") {
    const auto x = sine(10.0, 256.0, 8.0);
    const double e = oracle::energy(x.samples);
    const double alpha = oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Alpha), RhythmMethod::Dwt).samples);
    const double theta = oracle::energy(extract_rhythm(x, default_rhythm(Rhythm::Theta), RhythmMethod::Dwt).samples);
    CHECK(alpha >= 0.8 * e);
    CHECK(theta <= 0.2 * e);
  }

  TEST_CASE("rhythm names round-trip") {
    for (Rhythm r : {Rhythm::Theta, Rhythm::Alpha, Rhythm::Gamma}) CHECK(parse_rhythm(rhythm_name(r)) == r);
    CHECK(parse_method("dwt") == RhythmMethod::Dwt);
    CHECK_THROWS_AS(parse_rhythm("delta"), Error);
  }

  TEST_CASE("envelope of a unit sine") {
    const auto env = envelope(sine(10.0, 256.0, 8.0));
    const std::size_t edge = env.size() / 50;
    for (std::size_t i = edge; i + edge < env.size(); ++i) CHECK(std::fabs(env.samples[i] - 1.0) <= 0.02);
  }

  TEST_CASE("envelope recovers an amplitude modulator") {
    const double fs = 256.0;
    const std::size_t n = 2048;
    std::vector<double> v(n), mod(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      mod[i] = 1.0 + 0.5 * std::cos(2.0 * kPi * t);
      v[i] = mod[i] * std::sin(2.0 * kPi * 10.0 * t);
    }
    const auto env = envelope(TimeSeries(v, fs));
    const std::size_t edge = n / 50;
    long double sq = 0;
    for (std::size_t i = edge; i + edge < n; ++i) sq += (env.samples[i] - mod[i]) * (env.samples[i] - mod[i]);
    CHECK(std::sqrt(static_cast<double>(sq / (n - 2 * edge))) <= 0.03);
  }

  TEST_CASE("envelope of silence is silence") {
    const auto env = envelope(TimeSeries(std::vector<double>(256, 0.0), 256.0));
    for (double v : env.samples) CHECK(v == 0.0);
  }
}

TEST_SUITE("normalize") {
  TEST_CASE("scales to the target RMS") {
    const auto x = sine(440.0, 44100.0, 0.5, 0.5 * std::sqrt(2.0));
    CHECK(rms(x.samples) == doctest::Approx(0.5).epsilon(1e-12));
    const auto y = normalize(x, 0.1);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y.samples[i] == doctest::Approx(0.2 * x.samples[i]).epsilon(1e-12));
  }

  TEST_CASE("already at target is the identity") {
    TimeSeries x = sine(440.0, 44100.0, 0.5);
    x = normalize(x, 0.1);
    const auto y = normalize(x, 0.1);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(y.samples[i] - x.samples[i]) <= 1e-15);
  }

  TEST_CASE("different clips end at the same level") {
    const auto a = normalize(sine(300.0, 44100.0, 0.5, 3.0), 0.1);
    const auto b = normalize(synth::white_noise(22050, RandomSeed{2}, 44100.0), 0.1);
    CHECK(std::fabs(rms(a.samples) - rms(b.samples)) <= 1e-9);
  }

  TEST_CASE("silence cannot be normalized") {
    try {
      normalize(TimeSeries(std::vector<double>(100, 0.0), 44100.0), 0.1);
      FAIL("expected SilentInput");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SilentInput);
    }
  }
}

TEST_SUITE("wavelet") {
  TEST_CASE("filters are orthonormal") {
    const auto h = db4_lowpass();
    const auto g = db4_highpass();
    REQUIRE(h.size() == 8);
    double hh = 0, gg = 0, hg = 0, sum = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      hh += h[i] * h[i];
      gg += g[i] * g[i];
      hg += h[i] * g[i];
      sum += h[i];
    }
    CHECK(hh == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gg == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(hg) <= 1e-12);
    CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }

  TEST_CASE("perfect reconstruction across lengths") {
    for (std::size_t n : {64u, 100u, 257u, 1000u, 4096u}) {
      const auto x = synth::white_noise(n, RandomSeed{n + 1});
      const auto c = dwt(x, max_dwt_levels(n));
      CHECK(rel_rms_error(x.samples, idwt(c).samples) <= 1e-10);
    }
  }

  TEST_CASE("constant signal has vanishing details") {
    const TimeSeries x(std::vector<double>(256, 3.0), 1.0);
    const auto c = dwt(x, 4);
    for (const auto& d : c.details) {
      for (double v : d) CHECK(std::fabs(v) <= 1e-10);
    }
  }

  TEST_CASE("unit impulses return the filter taps") {
    const auto h = db4_lowpass();
    const auto g = db4_highpass();
    for (std::size_t pos : {6u, 7u}) {
      std::vector<double> x(16, 0.0);
      x[pos] = 1.0;
      const auto c = dwt(TimeSeries(x, 1.0), 1);
      CHECK(c.approximation == oracle::conv_decimate(x, h));
      CHECK(c.details[0] == oracle::conv_decimate(x, g));
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(c.approximation[k] == doctest::Approx(h[pos - 2 * k]).epsilon(1e-15));
        CHECK(c.details[0][k] == doctest::Approx(g[pos - 2 * k]).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("analysis step matches convolution and decimation") {
    const auto x = synth::white_noise(128, RandomSeed{77});
    std::vector<double> a, d;
    dwt_step(x.samples, a, d);
    const auto ra = oracle::conv_decimate(x.samples, db4_lowpass());
    const auto rd = oracle::conv_decimate(x.samples, db4_highpass());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] == doctest::Approx(ra[k]).epsilon(1e-13));
      CHECK(d[k] == doctest::Approx(rd[k]).epsilon(1e-13));
    }
  }

  TEST_CASE("energy is preserved on even lengths") {
    const auto x = synth::white_noise(1024, RandomSeed{31});
    const auto c = dwt(x, 5);
    double e = oracle::energy(c.approximation);
    for (const auto& d : c.details) e += oracle::energy(d);
    CHECK(e == doctest::Approx(oracle::energy(x.samples)).epsilon(1e-10));
  }

  TEST_CASE("too many levels") {
    CHECK_THROWS_AS(dwt(synth::white_noise(64, RandomSeed{1}), 5), Error);
  }
}

TEST_SUITE("emd") {
  TEST_CASE("monotonic ramp has no IMFs") {
    std::vector<double> v(256);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.01 * static_cast<double>(i);
    const auto set = emd(TimeSeries(v, 256.0));
    CHECK(set.imfs.empty());
    CHECK(set.residue.samples == v);
  }

  TEST_CASE("two tones separate") {
    const auto slow = sine(2.0, 256.0, 8.0);
    const auto fast = sine(40.0, 256.0, 8.0);
    const auto set = emd(add(slow, fast));
    REQUIRE(set.imfs.size() >= 2);
    CHECK(oracle::correlation(set.imfs[0].samples, fast.samples) >= 0.95);
    double best = 0.0;
    for (const auto& imf : set.imfs) best = std::max(best, oracle::correlation(imf.samples, slow.samples));
    CHECK(best >= 0.95);
  }

  TEST_CASE("IMFs and residue sum back to the input") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto x = synth::fgn({2048, 0.7, RandomSeed{seed}});
      const auto set = emd(x);
      CHECK(rel_rms_error(x.samples, set.reconstruct().samples) <= 1e-10);
    }
  }

  TEST_CASE("dropping nothing is the identity") {
    const auto x = synth::white_noise(512, RandomSeed{4});
    const auto y = emd_denoise(x, std::vector<std::size_t>{});
    CHECK(rel_rms_error(x.samples, y.samples) <= 1e-10);
  }

  TEST_CASE("dropping every IMF leaves the residue") {
    const auto x = add(sine(3.0, 256.0, 4.0), sine(30.0, 256.0, 4.0));
    const auto set = emd(x);
    std::vector<std::size_t> all;
    for (std::size_t i = 1; i <= set.imfs.size(); ++i) all.push_back(i);
    const auto y = emd_denoise(set, x, all);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(y.samples[i] - set.residue.samples[i]) <= 1e-12);
  }

  TEST_CASE("dropping the first IMF removes fast jitter") {
    const auto clean = sine(4.0, 256.0, 8.0);
    TimeSeries noisy = clean;
    Rng rng(RandomSeed{10});
    for (double& v : noisy.samples) v += 0.1 * rng.gaussian();
    const std::vector<std::size_t> drop{1};
    const auto y = emd_denoise(noisy, drop);
    const double before = rel_rms_error(clean.samples, noisy.samples);
    const double after = rel_rms_error(clean.samples, y.samples);
    CHECK(after < 0.8 * before);
  }

  TEST_CASE("bad IMF index and short input") {
    const auto x = add(sine(3.0, 256.0, 4.0), sine(30.0, 256.0, 4.0));
    CHECK_THROWS_AS(emd_denoise(x, std::vector<std::size_t>{0}), Error);
    CHECK_THROWS_AS(emd_denoise(x, std::vector<std::size_t>{99}), Error);
    CHECK_THROWS_AS(emd(synth::white_noise(10, RandomSeed{1})), Error);
  }

  TEST_CASE("natural spline reproduces a straight line") {
    const std::vector<double> x{0, 3, 7, 10};
    const std::vector<double> y{1, 7, 15, 21};
    const auto s = natural_cubic_spline(x, y, 11);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(1.0 + 2.0 * i).epsilon(1e-12));
  }
}

TEST_SUITE("wav") {
  TEST_CASE("16-bit round trip") {
    const auto x = normalize(synth::white_noise(1000, RandomSeed{1}, 44100.0), 0.1);
    wav::WavInfo info;
    const auto bytes = wav::encode_pcm16(x);
    const auto y = wav::decode(bytes, &info);
    CHECK(info.sample_rate == 44100);
    CHECK(info.bits_per_sample == 16);
    CHECK(info.frames == 1000);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(y.samples[i] - x.samples[i]) <= 1.0 / 16384.0);
  }

  TEST_CASE("24-bit stereo is averaged to mono") {
    const auto l = sine(1000.0, 48000.0, 0.1, 0.5);
    TimeSeries r = l;
    for (double& v : r.samples) v = -0.25;
    const auto bytes = wav::encode_pcm({l, r}, 24);
    wav::WavInfo info;
    const auto y = wav::decode(bytes, &info);
    CHECK(info.channels == 2);
    CHECK(info.bits_per_sample == 24);
    for (std::size_t i = 0; i < y.size(); ++i) {
      CHECK(std::fabs(y.samples[i] - 0.5 * (l.samples[i] - 0.25)) <= 1e-6);
    }
  }

  TEST_CASE("garbage is a parse error") {
    const std::vector<std::uint8_t> junk{'R', 'I', 'F', 'F', 0, 0};
    CHECK_THROWS_AS(wav::decode(junk), Error);
  }
}
