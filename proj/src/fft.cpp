#include "mfx/fft.hpp"

#include "mfx/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace mfx::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t count) {
  auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)));
  if (raw == nullptr) throw Error(Errc::IoFailure, "fftw_malloc failed");
  return FftwBuffer<T>(raw);
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) throw Error(Errc::InvalidArgument, "FFTW could not create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

int as_int(std::size_t n) {
  if (n == 0) throw Error(Errc::EmptySeries, "FFT of empty input");
  if (n > static_cast<std::size_t>(1) << 30) throw Error(Errc::InvalidArgument, "FFT too large");
  return static_cast<int>(n);
}

std::vector<Complex> complex_transform(std::span<const Complex> x, int sign) {
  const int n = as_int(x.size());
  auto in = allocate<fftw_complex>(x.size());
  auto out = allocate<fftw_complex>(x.size());
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_1d(n, in.get(), out.get(), sign, FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    in[i][0] = x[i].real();
    in[i][1] = x[i].imag();
  }
  plan->execute();
  std::vector<Complex> result(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) result[i] = {out[i][0], out[i][1]};
  return result;
}

}  // namespace

std::vector<Complex> forward_real(std::span<const double> x) {
  const int n = as_int(x.size());
  const std::size_t bins = x.size() / 2 + 1;
  auto in = allocate<double>(x.size());
  auto out = allocate<fftw_complex>(bins);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), in.get());
  plan->execute();
  std::vector<Complex> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> inverse_real(std::span<const Complex> half_spectrum, std::size_t n) {
  const int len = as_int(n);
  const std::size_t bins = n / 2 + 1;
  if (half_spectrum.size() != bins) {
    throw Error(Errc::InvalidArgument, "half spectrum size does not match n / 2 + 1");
  }
  auto in = allocate<fftw_complex>(bins);
  auto out = allocate<double>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    // c2r destroys its input, which is a private copy here.
    plan = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(len, in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < bins; ++k) {
    in[k][0] = half_spectrum[k].real();
    in[k][1] = half_spectrum[k].imag();
  }
  // Bins whose conjugate is themselves must be real for a real output.
  in[0][1] = 0.0;
  if (n % 2 == 0) in[bins - 1][1] = 0.0;
  plan->execute();
  std::vector<double> result(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = out[i] * scale;
  return result;
}

std::vector<Complex> forward(std::span<const Complex> x) {
  return complex_transform(x, FFTW_FORWARD);
}

std::vector<Complex> inverse(std::span<const Complex> x) {
  auto result = complex_transform(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : result) v *= scale;
  return result;
}

}  // namespace mfx::fft
