#pragma once

#include "mfx/decompose.hpp"
#include "mfx/mfdfa.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfx {

// Everything that determines a run. Precedence when resolving:
// command-line flags > MFX_* environment variables > config file > defaults.
struct RunConfig {
  // MFDFA
  int detrend_order = 1;
  std::vector<std::size_t> scales;  // explicit grid; empty -> log-spaced per window
  std::size_t scale_min = 16;
  std::size_t scale_count = 19;
  double q_min = -5.0;
  double q_max = 5.0;
  double q_step = 0.25;
  bool bidirectional = false;

  // EEG pipeline
  std::vector<RhythmSpec> rhythms = default_rhythms();
  RhythmMethod rhythm_method = RhythmMethod::Fft;
  bool envelope = true;
  bool emd = true;
  std::vector<std::size_t> emd_drop{1};
  std::size_t emd_max_imfs = 10;
  std::string baseline = "rest";  // timeline label whose window is the baseline
  int n_clips = 4;
  std::vector<std::string> electrodes;  // empty -> the analyzed registry
  std::optional<double> fs_hz;

  // audio
  double target_rms = 0.1;

  std::uint64_t seed = 1;

  // execution only; never embedded in outputs
  std::size_t workers = 1;
  std::string outdir = ".";
};

std::vector<double> q_grid(const RunConfig& cfg);

// MFDFA settings for a window of n samples.
MfdfaConfig mfdfa_config(const RunConfig& cfg, std::size_t n);

// Throws InvalidArgument naming the offending field.
void validate(const RunConfig& cfg);

// Analysis settings only (no workers/outdir), stable key order.
nlohmann::json to_json(const RunConfig& cfg);
// Overlays the keys present in j onto base.
RunConfig from_json(const nlohmann::json& j, RunConfig base = {});

}  // namespace mfx
