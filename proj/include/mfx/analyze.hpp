#pragma once

#include "mfx/config.hpp"
#include "mfx/protocol.hpp"
#include "mfx/report.hpp"
#include "mfx/series.hpp"
#include "mfx/spectrum.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mfx {

// Multichannel EEG: one series per electrode column, shared sample rate.
struct EegRecording {
  std::vector<std::string> channels;
  std::vector<TimeSeries> data;

  const TimeSeries& channel(std::string_view name) const;  // MissingChannel
};

// CSV with header `sample,F3,F4,...`; the leading `sample` column is optional
// and ignored.
EegRecording parse_eeg_csv(std::string_view text, double sample_rate_hz);

struct WindowWidth {
  SpectrumFit fit;
  double h2_r_squared = 0.0;
};

// One condition window of one electrode through (EMD denoise) -> rhythm
// extraction -> (envelope) -> MFDFA -> spectrum fit, once per configured rhythm
// (in cfg.rhythms order).
std::vector<WindowWidth> analyze_window(const TimeSeries& window, const RunConfig& cfg);

// Every (electrode x analyzed condition) job, run on cfg.workers threads.
// Analyzed conditions are the baseline window (reported as condition "rest",
// clip 0) and every stimulus window. Records come back in job order
// (electrode, then timeline order, then rhythm) for any worker count.
std::vector<report::WidthRecord> analyze_recording(const EegRecording& eeg,
                                                   const protocol::ProtocolTimeline& timeline,
                                                   const RunConfig& cfg,
                                                   const std::string& subject_id);

}  // namespace mfx
