#include "mfx/analyze.hpp"

#include "mfx/csv.hpp"
#include "mfx/decompose.hpp"
#include "mfx/emd.hpp"
#include "mfx/error.hpp"
#include "mfx/mfdfa.hpp"
#include "mfx/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace mfx {
namespace {

double r_squared_at(const HurstCurve& h, double q) {
  for (std::size_t i = 0; i < h.q.size(); ++i) {
    if (std::fabs(h.q[i] - q) < 1e-9) return h.r_squared[i];
  }
  return std::nan("");
}

struct Job {
  std::size_t channel = 0;
  const protocol::ConditionWindow* window = nullptr;
};

}  // namespace

const TimeSeries& EegRecording::channel(std::string_view name) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] == name) return data[i];
  }
  throw Error(Errc::MissingChannel, "recording has no column for electrode '" + std::string(name) + "'");
}

EegRecording parse_eeg_csv(std::string_view text, double sample_rate_hz) {
  const io::CsvTable table = io::parse_csv(text);
  const std::size_t first = !table.header.empty() && table.header[0] == "sample" ? 1 : 0;
  if (table.header.size() <= first) throw Error(Errc::ParseError, "EEG CSV has no electrode columns");
  if (table.rows.empty()) throw Error(Errc::EmptySeries, "EEG CSV has no samples");

  EegRecording rec;
  const std::size_t n_channels = table.header.size() - first;
  std::vector<std::vector<double>> columns(n_channels);
  for (auto& c : columns) c.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < n_channels; ++c) {
      columns[c].push_back(io::parse_number(table.rows[r][first + c], table.line_numbers[r], first + c + 1));
    }
  }
  for (std::size_t c = 0; c < n_channels; ++c) {
    const std::string& name = table.header[first + c];
    if (std::find(rec.channels.begin(), rec.channels.end(), name) != rec.channels.end()) {
      throw Error(Errc::ParseError, "EEG CSV repeats the column '" + name + "'");
    }
    rec.channels.push_back(name);
    rec.data.emplace_back(std::move(columns[c]), sample_rate_hz);
  }
  return rec;
}

std::vector<WindowWidth> analyze_window(const TimeSeries& window, const RunConfig& cfg) {
  TimeSeries clean = window;
  if (cfg.emd) {
    EmdOptions opts;
    opts.max_imfs = cfg.emd_max_imfs;
    clean = emd_denoise(window, cfg.emd_drop, opts);
  }

  std::vector<WindowWidth> out;
  out.reserve(cfg.rhythms.size());
  for (const auto& rhythm : cfg.rhythms) {
    TimeSeries x = extract_rhythm(clean, rhythm, cfg.rhythm_method);
    if (cfg.envelope) x = envelope(x);
    const MfdfaResult mf = run_mfdfa(x, mfdfa_config(cfg, x.size()));
    WindowWidth w;
    w.fit = fit_spectrum(singularity_spectrum(mf.hurst));
    w.h2_r_squared = r_squared_at(mf.hurst, 2.0);
    out.push_back(w);
  }
  return out;
}

std::vector<report::WidthRecord> analyze_recording(const EegRecording& eeg,
                                                   const protocol::ProtocolTimeline& timeline,
                                                   const RunConfig& cfg,
                                                   const std::string& subject_id) {
  validate(cfg);
  const std::vector<std::string> electrodes =
      cfg.electrodes.empty() ? protocol::analyzed_electrodes() : cfg.electrodes;

  // Resolve every channel before any work so a missing one fails fast.
  std::vector<const TimeSeries*> channels;
  for (const auto& e : electrodes) channels.push_back(&eeg.channel(e));

  std::vector<std::vector<protocol::ConditionWindow>> windows;
  windows.reserve(channels.size());
  for (const auto* ch : channels) {
    auto all = protocol::segment_recording(*ch, timeline);
    std::erase_if(all, [&](const protocol::ConditionWindow& w) {
      return !(w.condition.is_stimulus() || w.condition.label == cfg.baseline);
    });
    windows.push_back(std::move(all));
  }

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < windows.size(); ++c) {
    for (const auto& w : windows[c]) jobs.push_back({c, &w});
  }

  std::vector<std::vector<WindowWidth>> results(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      results[i] = analyze_window(job.window->data, cfg);
    } catch (const Error& e) {
      throw Error(e.code(), electrodes[job.channel] + ", condition '" + job.window->condition.label +
                                "': " + e.detail());
    }
  });

  std::vector<report::WidthRecord> records;
  records.reserve(jobs.size() * cfg.rhythms.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& cond = jobs[i].window->condition;
    const bool baseline = cond.label == cfg.baseline;
    for (std::size_t r = 0; r < cfg.rhythms.size(); ++r) {
      const WindowWidth& w = results[i][r];
      report::WidthRecord rec;
      rec.subject_id = subject_id;
      rec.electrode = electrodes[jobs[i].channel];
      rec.rhythm = rhythm_name(cfg.rhythms[r].rhythm);
      rec.clip = baseline ? 0 : cond.clip;
      rec.condition = baseline ? "rest" : cond.analysis_name();
      rec.W = w.fit.W;
      rec.A = w.fit.A;
      rec.B = w.fit.B;
      rec.alpha0 = w.fit.alpha0;
      rec.h2_r_squared = w.h2_r_squared;
      rec.non_concave = w.fit.non_concave;
      rec.monofractal_degenerate = w.fit.monofractal_degenerate;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace mfx
