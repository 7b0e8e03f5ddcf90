#pragma once

#include "mfx/error.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mfx {

// Uniformly sampled real-valued signal.
struct TimeSeries {
  std::vector<double> samples;
  double sample_rate_hz = 1.0;

  TimeSeries() = default;
  TimeSeries(std::vector<double> values, double rate_hz);

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
  std::span<const double> view() const noexcept { return samples; }
};

// Cumulative sum of the mean-removed series.
struct ProfileSeries {
  std::vector<double> values;
  std::size_t source_length = 0;
};

struct RandomSeed {
  std::uint64_t value = 0;
};

struct BasicStats {
  double mean = 0.0;
  double variance = 0.0;  // population (1/N)
  double min = 0.0;
  double max = 0.0;
};

// Deterministic random source with a frozen generator specification:
//   engine    std::mt19937_64 seeded with the 64-bit seed (bit-exact by the
//             C++ standard on every platform)
//   uniform   (draw >> 11) * 2^-53, in [0, 1)
//   below(n)  rejection of draws < (2^64 - n) mod n, then draw mod n
//   gaussian  Box-Muller on (1 - u1, u2); both outputs are used, cosine first
// std:: distributions are not used because their output is implementation
// defined.
class Rng {
 public:
  explicit Rng(RandomSeed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  std::uint64_t below(std::uint64_t n);
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Throws NonFinite if any sample is NaN or infinite.
void require_finite(std::span<const double> values);

ProfileSeries profile(const TimeSeries& ts);

// Fisher-Yates: for i = n-1 down to 1, swap(x[i], x[below(i + 1)]).
TimeSeries shuffle(const TimeSeries& ts, RandomSeed seed);

BasicStats basic_stats(const TimeSeries& ts);

double rms(std::span<const double> values);
double energy(std::span<const double> values);

// Compensated (Neumaier) summation; order of accumulation is the sequence order.
class KahanSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

}  // namespace mfx
