#include "mfx/protocol.hpp"

#include "mfx/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace mfx::protocol {

std::string Condition::analysis_name() const {
  switch (kind) {
    case ConditionKind::Rest: return "rest";
    case ConditionKind::Original: return "original";
    case ConditionKind::Band: return "band" + std::to_string(band);
  }
  return "rest";
}

double ProtocolTimeline::total_duration_s() const noexcept {
  return conditions.empty() ? 0.0 : conditions.back().end_s - conditions.front().start_s;
}

const Condition& ProtocolTimeline::find(std::string_view label) const {
  for (const auto& c : conditions) {
    if (c.label == label) return c;
  }
  throw Error(Errc::InvalidArgument, "no condition labelled '" + std::string(label) + "'");
}

const std::array<int, 6>& stimulus_order() {
  static const std::array<int, 6> order{0, 3, 2, 5, 4, 1};  // 0 = original clip
  return order;
}

ProtocolTimeline build_timeline(int n_clips) {
  if (n_clips < 1) throw Error(Errc::InvalidArgument, "timeline needs at least one clip");
  ProtocolTimeline tl;
  tl.n_clips = n_clips;
  double t = 0.0;
  const auto add = [&](ConditionKind kind, int clip, int band, double duration, std::string label) {
    tl.conditions.push_back({kind, clip, band, t, t + duration, std::move(label)});
    t += duration;
  };

  add(ConditionKind::Rest, 0, 0, kBaselineRestS, "rest");
  for (int clip = 1; clip <= n_clips; ++clip) {
    const std::string prefix = "c" + std::to_string(clip) + "_";
    const auto& order = stimulus_order();
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0) add(ConditionKind::Rest, clip, 0, kGapS, prefix + "gap" + std::to_string(i));
      if (order[i] == 0) {
        add(ConditionKind::Original, clip, 0, kStimulusS, prefix + "original");
      } else {
        add(ConditionKind::Band, clip, order[i], kStimulusS,
            prefix + "band" + std::to_string(order[i]));
      }
    }
    add(ConditionKind::Rest, clip, 0, kClipRestS, prefix + "rest");
  }
  return tl;
}

int part_to_band(int part) {
  static constexpr std::array<int, 5> kMap{3, 2, 5, 4, 1};
  if (part < 1 || part > 5) throw Error(Errc::BadPart, "part must be 1..5, got " + std::to_string(part));
  return kMap[static_cast<std::size_t>(part - 1)];
}

int band_to_part(int band) {
  for (int part = 1; part <= 5; ++part) {
    if (part_to_band(part) == band) return part;
  }
  throw Error(Errc::BadPart, "band must be 1..5, got " + std::to_string(band));
}

const std::vector<std::string>& all_electrodes() {
  static const std::vector<std::string> labels{"Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8",
                                               "T3",  "C3",  "Cz", "C4", "T4", "T5", "P3",
                                               "Pz",  "P4",  "T6", "O1", "O2"};
  return labels;
}

const std::vector<std::string>& analyzed_electrodes() {
  static const std::vector<std::string> labels{"F3", "F4", "F7", "F8", "T3",
                                               "T4", "T5", "T6", "O1", "O2"};
  return labels;
}

bool is_analyzed(std::string_view electrode) {
  const auto& a = analyzed_electrodes();
  return std::find(a.begin(), a.end(), electrode) != a.end();
}

std::vector<ConditionWindow> segment_recording(const TimeSeries& eeg,
                                               const ProtocolTimeline& timeline) {
  const double fs = eeg.sample_rate_hz;
  std::vector<ConditionWindow> out;
  out.reserve(timeline.conditions.size());
  for (const auto& c : timeline.conditions) {
    const auto begin = static_cast<long long>(std::llround(c.start_s * fs));
    const auto end = static_cast<long long>(std::llround(c.end_s * fs));
    if (begin < 0 || end <= begin) {
      throw Error(Errc::InvalidArgument, "condition '" + c.label + "' has an empty window");
    }
    if (static_cast<std::size_t>(end) > eeg.size()) {
      throw Error(Errc::RecordingTooShort,
                  "condition '" + c.label + "' needs samples up to " + std::to_string(end) +
                      " but the recording has " + std::to_string(eeg.size()));
    }
    std::vector<double> slice(eeg.samples.begin() + begin, eeg.samples.begin() + end);
    out.push_back({c, TimeSeries(std::move(slice), fs)});
  }
  return out;
}

std::vector<Marker> parse_markers(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("markers: ") + e.what());
  }
  if (!j.is_array()) throw Error(Errc::ParseError, "markers: expected a JSON array");
  std::vector<Marker> out;
  for (const auto& item : j) {
    try {
      Marker m{item.at("label").get<std::string>(), item.at("start_s").get<double>(),
               item.at("end_s").get<double>()};
      if (!(m.end_s > m.start_s) || m.start_s < 0.0) {
        throw Error(Errc::ParseError, "markers: '" + m.label + "' has end_s <= start_s");
      }
      out.push_back(std::move(m));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ParseError, std::string("markers: ") + e.what());
    }
  }
  return out;
}

ProtocolTimeline apply_markers(ProtocolTimeline timeline, const std::vector<Marker>& markers) {
  for (const auto& m : markers) {
    auto it = std::find_if(timeline.conditions.begin(), timeline.conditions.end(),
                           [&](const Condition& c) { return c.label == m.label; });
    if (it == timeline.conditions.end()) {
      throw Error(Errc::InvalidArgument, "marker '" + m.label + "' matches no condition");
    }
    it->start_s = m.start_s;
    it->end_s = m.end_s;
  }
  return timeline;
}

std::vector<ResponseSheet> parse_response_sheets(std::string_view csv_text) {
  const io::CsvTable table = io::parse_csv(csv_text);
  const std::vector<std::string> expected{"subject", "clip",  "part1", "part2",
                                          "part3",   "part4", "part5"};
  if (table.header != expected) {
    throw Error(Errc::ParseError,
                "response sheet header must be subject,clip,part1,part2,part3,part4,part5");
  }

  std::vector<ResponseSheet> sheets;
  std::map<std::string, std::size_t> index;
  std::vector<std::array<bool, kClipsPerSheet>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    const double clip_value = io::parse_number(row[1], line, 2);
    if (clip_value != std::floor(clip_value) || clip_value < 1 || clip_value > kClipsPerSheet) {
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": clip must be 1..4");
    }
    const auto clip = static_cast<std::size_t>(clip_value);

    auto [it, inserted] = index.emplace(row[0], sheets.size());
    if (inserted) {
      sheets.push_back({row[0], {}});
      seen.push_back({});
    }
    if (seen[it->second][clip - 1]) {
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": subject '" + row[0] +
                                        "' has clip " + std::to_string(clip) + " twice");
    }
    seen[it->second][clip - 1] = true;
    for (std::size_t p = 0; p < kParts; ++p) {
      const auto& cell = row[2 + p];
      if (cell != "0" && cell != "1") {
        throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " +
                                          std::to_string(3 + p) + ": expected 0 or 1, got '" +
                                          cell + "'");
      }
      sheets[it->second].marks[clip - 1][p] = cell == "1";
    }
  }
  for (std::size_t s = 0; s < sheets.size(); ++s) {
    for (std::size_t c = 0; c < kClipsPerSheet; ++c) {
      if (!seen[s][c]) {
        throw Error(Errc::ParseError, "subject '" + sheets[s].subject_id + "' has no row for clip " +
                                          std::to_string(c + 1));
      }
    }
  }
  return sheets;
}

RecognitionTable aggregate_responses(const std::vector<ResponseSheet>& sheets) {
  if (sheets.empty()) throw Error(Errc::NoSheets, "no response sheets to aggregate");
  RecognitionTable table;
  table.respondents = sheets.size();
  const auto n = static_cast<long long>(sheets.size());
  for (std::size_t clip = 0; clip < kClipsPerSheet; ++clip) {
    for (int band = 1; band <= 5; ++band) {
      const auto part = static_cast<std::size_t>(band_to_part(band) - 1);
      long long marks = 0;
      for (const auto& s : sheets) marks += s.marks[clip][part] ? 1 : 0;
      // round(100 * marks / n), half up, in exact integer arithmetic
      table.percent[clip][static_cast<std::size_t>(band - 1)] =
          static_cast<int>((200 * marks + n) / (2 * n));
    }
  }
  return table;
}

std::string to_csv(const RecognitionTable& table) {
  std::ostringstream os;
  os << "clip,band1,band2,band3,band4,band5\n";
  for (std::size_t clip = 0; clip < kClipsPerSheet; ++clip) {
    os << clip + 1;
    for (int v : table.percent[clip]) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace mfx::protocol
