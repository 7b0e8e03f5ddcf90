#pragma once

#include "mfx/series.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace mfx::protocol {

inline constexpr double kEegSampleRateHz = 256.0;
inline constexpr double kBaselineRestS = 60.0;
inline constexpr double kStimulusS = 20.0;
inline constexpr double kGapS = 5.0;
inline constexpr double kClipRestS = 30.0;
// Per clip: six stimuli, five gaps, one closing rest.
inline constexpr double kClipBlockS = 6 * kStimulusS + 5 * kGapS + kClipRestS;

inline constexpr int kClipsPerSheet = 4;
inline constexpr int kParts = 5;

enum class ConditionKind { Rest, Original, Band };

struct Condition {
  ConditionKind kind = ConditionKind::Rest;
  int clip = 0;  // 1-based; 0 for the baseline rest
  int band = 0;  // 1..5 for Band conditions
  double start_s = 0.0;
  double end_s = 0.0;
  // Unique key: "rest", "c<k>_original", "c<k>_band<b>", "c<k>_gap<g>", "c<k>_rest".
  std::string label;

  double duration_s() const noexcept { return end_s - start_s; }
  bool is_stimulus() const noexcept { return kind != ConditionKind::Rest; }
  bool is_baseline() const noexcept { return label == "rest"; }
  // "rest", "original", "band1".."band5" (the gaps and clip rests also map to "rest")
  std::string analysis_name() const;
};

struct ProtocolTimeline {
  std::vector<Condition> conditions;
  int n_clips = 0;

  double total_duration_s() const noexcept;
  const Condition& find(std::string_view label) const;
};

// Stimulus order within a clip: original, then bands 3, 2, 5, 4, 1.
const std::array<int, 6>& stimulus_order();

ProtocolTimeline build_timeline(int n_clips);

// Response-sheet part (1..5) to stimulus band: {1->3, 2->2, 3->5, 4->4, 5->1}.
int part_to_band(int part);
int band_to_part(int band);

const std::vector<std::string>& all_electrodes();       // 19 sites of the 10-20 system
const std::vector<std::string>& analyzed_electrodes();  // F3 F4 F7 F8 T3 T4 T5 T6 O1 O2
bool is_analyzed(std::string_view electrode);

struct ConditionWindow {
  Condition condition;
  TimeSeries data;
};

// Window [round(start * fs), round(end * fs)) per condition.
std::vector<ConditionWindow> segment_recording(const TimeSeries& eeg,
                                               const ProtocolTimeline& timeline);

// Optional boundary overrides: [{"label": "...", "start_s": x, "end_s": y}].
struct Marker {
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
};

std::vector<Marker> parse_markers(std::string_view json_text);
ProtocolTimeline apply_markers(ProtocolTimeline timeline, const std::vector<Marker>& markers);

struct ResponseSheet {
  std::string subject_id;
  // marks[clip - 1][part - 1]: true when the respondent could not recognize the song
  std::array<std::array<bool, kParts>, kClipsPerSheet> marks{};
};

// CSV: subject,clip,part1,part2,part3,part4,part5 with 0/1 cells, one row
// per (subject, clip); every subject needs all four clips exactly once.
std::vector<ResponseSheet> parse_response_sheets(std::string_view csv_text);

struct RecognitionTable {
  // percent[clip - 1][band - 1], 0..100, rounded half up
  std::array<std::array<int, 5>, kClipsPerSheet> percent{};
  std::size_t respondents = 0;
};

RecognitionTable aggregate_responses(const std::vector<ResponseSheet>& sheets);

// clip,band1,band2,band3,band4,band5
std::string to_csv(const RecognitionTable& table);

}  // namespace mfx::protocol
