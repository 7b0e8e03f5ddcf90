#include "mfx/cli.hpp"

#include "mfx/analyze.hpp"
#include "mfx/config.hpp"
#include "mfx/csv.hpp"
#include "mfx/decompose.hpp"
#include "mfx/error.hpp"
#include "mfx/mfdfa.hpp"
#include "mfx/protocol.hpp"
#include "mfx/report.hpp"
#include "mfx/spectrum.hpp"
#include "mfx/synth.hpp"
#include "mfx/wav.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>

namespace mfx::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kMfdfaSchema = "mfx-mfdfa/1";

// Options shared by the commands that resolve a RunConfig.
struct ConfigFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> outdir;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;

  std::optional<int> order;
  std::vector<std::size_t> scales;
  std::optional<std::size_t> scale_min;
  std::optional<std::size_t> scale_count;
  std::optional<double> q_min;
  std::optional<double> q_max;
  std::optional<double> q_step;
  bool bidirectional = false;
  CLI::Option* scales_opt = nullptr;
  CLI::Option* bidirectional_opt = nullptr;
};

struct PipelineFlags {
  std::optional<double> fs;
  std::optional<std::string> markers;
  std::optional<std::string> rhythm_method;
  std::optional<std::string> baseline;
  std::optional<int> clips;
  std::optional<std::string> subject;
  std::vector<std::string> electrodes;
  std::vector<std::size_t> emd_drop;
  bool emd = true;
  bool envelope = true;
  CLI::Option* electrodes_opt = nullptr;
  CLI::Option* emd_drop_opt = nullptr;
  CLI::Option* emd_opt = nullptr;
  CLI::Option* envelope_opt = nullptr;
};

struct SynthFlags {
  std::string kind;
  std::string out;
  int k = 16;
  double a = 0.75;
  std::size_t n = 65536;
  double hurst = 0.5;
  std::uint64_t seed = 1;
  double freq = 440.0;
  std::optional<double> fs;  // 44.1 kHz for audio kinds, 256 Hz for eeg
  std::optional<double> duration;
  double amplitude = 1.0;
  int clips = 4;
  std::vector<std::string> channels;
};

void add_config_flags(CLI::App* app, ConfigFlags& f, bool with_mfdfa) {
  app->add_option("--config", f.config_path, "JSON config file (flags take precedence)");
  app->add_option("--outdir", f.outdir, "Output directory (env MFX_OUTDIR)");
  app->add_option("--seed", f.seed, "Random seed recorded with the run");
  if (!with_mfdfa) return;
  app->add_option("--order", f.order, "Detrending polynomial order (1-3)");
  f.scales_opt = app->add_option("--scales", f.scales, "Explicit scale list, comma separated")
                     ->delimiter(',');
  app->add_option("--scale-min", f.scale_min, "Smallest scale of the log-spaced grid");
  app->add_option("--scale-count", f.scale_count, "Number of log-spaced scales");
  app->add_option("--q-min", f.q_min, "Lowest moment order");
  app->add_option("--q-max", f.q_max, "Highest moment order");
  app->add_option("--q-step", f.q_step, "Moment order spacing");
  f.bidirectional_opt = app->add_flag("--bidirectional,!--no-bidirectional", f.bidirectional,
                                      "Also segment the profile from its end");
}

void add_pipeline_flags(CLI::App* app, PipelineFlags& p, ConfigFlags& c) {
  app->add_option("--fs", p.fs, "Sampling rate in Hz (else the sidecar JSON)");
  app->add_option("--markers", p.markers, "JSON condition-boundary overrides");
  app->add_option("--workers", c.workers, "Worker threads (env MFX_WORKERS)");
  app->add_option("--rhythm-method", p.rhythm_method, "Rhythm extraction: fft or dwt")
      ->check(CLI::IsMember({"fft", "dwt"}));
  app->add_option("--baseline", p.baseline, "Timeline label of the baseline window");
  app->add_option("--clips", p.clips, "Number of clips in the session timeline");
  app->add_option("--subject", p.subject, "Subject id (default: input file stem)");
  p.electrodes_opt =
      app->add_option("--electrodes", p.electrodes, "Electrodes to analyze, comma separated")
          ->delimiter(',');
  p.emd_drop_opt =
      app->add_option("--emd-drop", p.emd_drop, "IMFs to drop, 1-based, comma separated")
          ->delimiter(',');
  p.emd_opt = app->add_flag("--emd,!--no-emd", p.emd, "EMD denoising before rhythm extraction");
  p.envelope_opt =
      app->add_flag("--envelope,!--no-envelope", p.envelope, "Analyze the rhythm envelope");
}

std::size_t parse_env_count(const char* name, const char* text) {
  std::size_t v = 0;
  const std::string_view s(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    throw Error(Errc::InvalidArgument,
                std::string(name) + " must be a positive integer, got '" + std::string(s) + "'");
  }
  return v;
}

RunConfig resolve(const ConfigFlags& c, const PipelineFlags* p) {
  RunConfig cfg;
  if (c.config_path) {
    json j;
    try {
      j = json::parse(io::read_text_file(*c.config_path));
    } catch (const json::parse_error& e) {
      throw Error(Errc::ParseError, *c.config_path + ": " + e.what());
    }
    cfg = from_json(j, cfg);
  }
  if (const char* w = std::getenv("MFX_WORKERS"); w != nullptr && *w != '\0') {
    cfg.workers = parse_env_count("MFX_WORKERS", w);
  }
  if (const char* o = std::getenv("MFX_OUTDIR"); o != nullptr && *o != '\0') cfg.outdir = o;

  if (c.outdir) cfg.outdir = *c.outdir;
  if (c.workers) cfg.workers = *c.workers;
  if (c.seed) cfg.seed = *c.seed;
  if (c.order) cfg.detrend_order = *c.order;
  if (c.scales_opt != nullptr && c.scales_opt->count() > 0) cfg.scales = c.scales;
  if (c.scale_min) cfg.scale_min = *c.scale_min;
  if (c.scale_count) cfg.scale_count = *c.scale_count;
  if (c.q_min) cfg.q_min = *c.q_min;
  if (c.q_max) cfg.q_max = *c.q_max;
  if (c.q_step) cfg.q_step = *c.q_step;
  if (c.bidirectional_opt != nullptr && c.bidirectional_opt->count() > 0) {
    cfg.bidirectional = c.bidirectional;
  }
  if (p != nullptr) {
    if (p->fs) cfg.fs_hz = *p->fs;
    if (p->rhythm_method) cfg.rhythm_method = parse_method(*p->rhythm_method);
    if (p->baseline) cfg.baseline = *p->baseline;
    if (p->clips) cfg.n_clips = *p->clips;
    if (p->electrodes_opt->count() > 0) cfg.electrodes = p->electrodes;
    if (p->emd_drop_opt->count() > 0) cfg.emd_drop = p->emd_drop;
    if (p->emd_opt->count() > 0) cfg.emd = p->emd;
    if (p->envelope_opt->count() > 0) cfg.envelope = p->envelope;
  }
  validate(cfg);
  return cfg;
}

void echo(std::ostream& err, const std::string& command, const json& resolved) {
  err << "mfx " << command << ": " << resolved.dump() << '\n';
}

json echo_config(const RunConfig& cfg) {
  json j = to_json(cfg);
  j["workers"] = cfg.workers;
  j["outdir"] = cfg.outdir;
  return j;
}

json input_record(const fs::path& path, const std::string& bytes) {
  return {{"name", path.filename().string()}, {"fnv1a64", io::fnv1a64_hex(bytes)}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create directory " + dir.string());
}

// ---------------------------------------------------------------- commands

int cmd_split_bands(const std::string& input, const RunConfig& cfg, std::ostream& out) {
  const TimeSeries audio = wav::read(input);
  const auto bands = split_bands(audio);
  const double input_rms = rms(audio.view());
  if (!(input_rms > 0.0)) throw Error(Errc::SilentInput, input + " is silent");

  const fs::path dir(cfg.outdir);
  ensure_dir(dir);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    // A band with essentially no content stays silent instead of having its
    // leakage amplified to the target level.
    const bool empty = rms(bands[b].view()) < 1e-3 * input_rms;
    const TimeSeries emitted =
        empty ? TimeSeries(std::vector<double>(bands[b].size(), 0.0), audio.sample_rate_hz)
              : normalize(bands[b], cfg.target_rms);
    const fs::path path = dir / ("band" + std::to_string(b + 1) + ".wav");
    wav::write_pcm16(path, emitted);
    out << path.string() << (empty ? " (silent)" : "") << '\n';
  }
  return kExitOk;
}

int cmd_mfdfa(const std::string& input, const RunConfig& cfg, std::optional<double> fs_hz,
              const std::optional<std::string>& out_path,
              const std::optional<std::string>& fq_csv, std::ostream& out) {
  const std::string text = io::read_text_file(input);
  const TimeSeries ts(io::parse_series_csv(text), fs_hz.value_or(1.0));
  const MfdfaResult mf = run_mfdfa(ts, mfdfa_config(cfg, ts.size()));
  const SingularitySpectrum spec = singularity_spectrum(mf.hurst);
  const SpectrumFit fit = fit_spectrum(spec);
  const ScalingCurve tau = scaling_exponents(mf.hurst);

  json points = {{"q", json::array()}, {"alpha", json::array()}, {"f", json::array()}};
  for (const auto& p : spec.points) {
    points["q"].push_back(p.q);
    points["alpha"].push_back(p.alpha);
    points["f"].push_back(p.f);
  }
  json j;
  j["schema"] = kMfdfaSchema;
  j["config"] = to_json(cfg);
  j["input"] = input_record(input, text);
  j["input"]["n_samples"] = ts.size();
  j["mfdfa"] = to_json(mf);
  j["tau"] = tau.tau;
  j["spectrum"] = points;
  j["fit"] = to_json(fit);

  const fs::path path = out_path ? fs::path(*out_path) : fs::path(cfg.outdir) / "result.json";
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  io::write_text_file(path, j.dump(2) + "\n");
  if (fq_csv) io::write_text_file(*fq_csv, to_csv(mf));
  out << "W " << io::format_g6(fit.W) << " h(2) " << io::format_g6(mf.hurst.at(2.0)) << " -> "
      << path.string() << '\n';
  return kExitOk;
}

double resolve_sample_rate(const RunConfig& cfg, const fs::path& eeg_path) {
  if (cfg.fs_hz) return *cfg.fs_hz;
  fs::path sidecar = eeg_path;
  sidecar.replace_extension(".json");
  if (fs::exists(sidecar)) {
    try {
      const json j = json::parse(io::read_text_file(sidecar));
      const double v = j.at("fs_hz").get<double>();
      if (!(v > 0.0)) throw Error(Errc::InvalidArgument, sidecar.string() + ": fs_hz must be positive");
      return v;
    } catch (const json::exception& e) {
      throw Error(Errc::ParseError, sidecar.string() + ": " + e.what());
    }
  }
  throw Error(Errc::InvalidArgument, "no sampling rate for " + eeg_path.string() +
                                         ": pass --fs or add " + sidecar.filename().string() +
                                         " with {\"fs_hz\": ...}");
}

int cmd_analyze(const std::string& input, RunConfig cfg, const PipelineFlags& p,
                std::ostream& out, std::ostream& err) {
  const fs::path eeg_path(input);
  cfg.fs_hz = resolve_sample_rate(cfg, eeg_path);
  validate(cfg);
  echo(err, "analyze", echo_config(cfg));

  const std::string text = io::read_text_file(eeg_path);
  const EegRecording eeg = parse_eeg_csv(text, *cfg.fs_hz);

  protocol::ProtocolTimeline timeline = protocol::build_timeline(cfg.n_clips);
  json inputs = json::array({input_record(eeg_path, text)});
  if (p.markers) {
    const std::string markers_text = io::read_text_file(*p.markers);
    timeline = protocol::apply_markers(timeline, protocol::parse_markers(markers_text));
    inputs.push_back(input_record(*p.markers, markers_text));
  }
  const std::string subject = p.subject.value_or(eeg_path.stem().string());

  report::AnalysisReport rep;
  rep.records = analyze_recording(eeg, timeline, cfg, subject);
  rep.metadata = {{"command", "analyze"},
                  {"config", to_json(cfg)},
                  {"inputs", inputs},
                  {"subjects", json::array({subject})},
                  {"rhythm_method", method_name(cfg.rhythm_method)},
                  {"timeline_s", timeline.total_duration_s()}};
  report::emit_report(rep, cfg.outdir);
  out << rep.records.size() << " widths -> " << (fs::path(cfg.outdir) / "report.csv").string()
      << '\n';
  return kExitOk;
}

void write_series(const fs::path& path, const TimeSeries& ts) {
  if (path.extension() == ".wav") {
    wav::write_pcm16(path, ts);
    return;
  }
  std::string text = "value\n";
  text.reserve(ts.size() * 24);
  for (double v : ts.samples) {
    text += io::format_exact(v);
    text += '\n';
  }
  io::write_text_file(path, text);
}

int cmd_synth(const SynthFlags& s, std::ostream& out, std::ostream& err) {
  const fs::path path(s.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  json params{{"kind", s.kind}};
  if (s.kind == "cascade") {
    params.update({{"k", s.k}, {"a", s.a}});
    echo(err, "synth", params);
    write_series(path, synth::binomial_cascade({s.k, s.a}));
  } else if (s.kind == "fgn") {
    params.update({{"n", s.n}, {"hurst", s.hurst}, {"seed", s.seed}});
    echo(err, "synth", params);
    write_series(path, synth::fgn({s.n, s.hurst, RandomSeed{s.seed}}));
  } else if (s.kind == "noise") {
    params.update({{"n", s.n}, {"seed", s.seed}, {"fs", s.fs.value_or(1.0)}});
    echo(err, "synth", params);
    write_series(path, synth::white_noise(s.n, RandomSeed{s.seed}, s.fs.value_or(1.0)));
  } else if (s.kind == "tone") {
    const double duration = s.duration.value_or(1.0);
    const double fs_hz = s.fs.value_or(44100.0);
    params.update({{"freq", s.freq}, {"fs", fs_hz}, {"duration", duration}, {"amplitude", s.amplitude}});
    echo(err, "synth", params);
    write_series(path, synth::tone(s.freq, fs_hz, duration, s.amplitude));
  } else {  // eeg
    synth::SyntheticEegParams e;
    e.channels = s.channels.empty() ? protocol::analyzed_electrodes() : s.channels;
    e.duration_s = s.duration.value_or(protocol::build_timeline(s.clips).total_duration_s());
    e.sample_rate_hz = s.fs.value_or(protocol::kEegSampleRateHz);
    e.seed = RandomSeed{s.seed};
    params.update({{"channels", e.channels}, {"duration", e.duration_s}, {"fs", e.sample_rate_hz},
                   {"seed", s.seed}});
    echo(err, "synth", params);
    const auto data = synth::synthetic_eeg(e);
    std::string text = "sample";
    for (const auto& c : e.channels) text += "," + c;
    text += '\n';
    const std::size_t n = data.empty() ? 0 : data.front().size();
    text.reserve(n * (8 + 12 * e.channels.size()));
    for (std::size_t i = 0; i < n; ++i) {
      text += std::to_string(i);
      for (const auto& ch : data) {
        text += ',';
        text += io::format_exact(ch.samples[i]);
      }
      text += '\n';
    }
    io::write_text_file(path, text);
    fs::path sidecar = path;
    sidecar.replace_extension(".json");
    io::write_text_file(sidecar, json{{"fs_hz", e.sample_rate_hz}}.dump() + "\n");
  }
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_listening(const std::string& input, const std::optional<std::string>& out_path,
                  std::ostream& out, std::ostream& err) {
  const auto sheets = protocol::parse_response_sheets(io::read_text_file(input));
  const auto table = protocol::aggregate_responses(sheets);
  echo(err, "listening", {{"input", fs::path(input).filename().string()},
                          {"respondents", table.respondents}});
  const std::string csv = protocol::to_csv(table);
  if (out_path) {
    io::write_text_file(*out_path, csv);
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, const RunConfig& cfg, std::ostream& out,
               std::ostream& err) {
  echo(err, "report", {{"inputs", inputs}, {"outdir", cfg.outdir}});
  report::AnalysisReport merged;
  json sources = json::array();
  std::set<std::string> subjects;
  std::optional<json> config;
  for (const auto& input : inputs) {
    const std::string text = io::read_text_file(input);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(Errc::ParseError, input + ": " + e.what());
    }
    report::AnalysisReport part = report::from_json(j);
    const json part_config = part.metadata.value("config", json());
    if (config && *config != part_config) {
      throw Error(Errc::InvalidArgument,
                  input + " was produced with a different analysis config than " + inputs.front());
    }
    config = part_config;
    for (const auto& r : part.records) subjects.insert(r.subject_id);
    sources.push_back(input_record(input, text));
    merged.records.insert(merged.records.end(), part.records.begin(), part.records.end());
  }
  merged.metadata = {{"command", "report"},
                     {"config", config.value_or(json())},
                     {"inputs", sources},
                     {"subjects", subjects}};
  report::emit_report(merged, cfg.outdir);
  out << merged.records.size() << " widths from " << subjects.size() << " subjects -> "
      << (fs::path(cfg.outdir) / "report.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multifractal analysis of EEG responses to band-filtered music", "mfx"};
  app.require_subcommand(1);
  app.fallthrough(false);

  ConfigFlags split_cfg;
  std::string split_input;
  std::optional<double> target_rms;
  auto* split = app.add_subcommand("split-bands", "Split a WAV file into the five stimulus bands");
  split->add_option("input", split_input, "Input WAV (PCM 16/24-bit, >= 10 kHz)")->required();
  split->add_option("--target-rms", target_rms, "RMS of each emitted band (default 0.1)");
  add_config_flags(split, split_cfg, false);

  ConfigFlags mf_cfg;
  std::string mf_input;
  std::optional<double> mf_fs;
  std::optional<std::string> mf_out;
  std::optional<std::string> mf_fq_csv;
  auto* mf = app.add_subcommand("mfdfa", "MFDFA and spectrum width of a single-column CSV series");
  mf->add_option("input", mf_input, "Series CSV (first column, optional header)")->required();
  mf->add_option("--fs", mf_fs, "Sampling rate recorded with the series (default 1)");
  mf->add_option("-o,--out", mf_out, "Result JSON (default <outdir>/result.json)");
  mf->add_option("--fq-csv", mf_fq_csv, "Also write the fluctuation function as CSV");
  add_config_flags(mf, mf_cfg, true);

  ConfigFlags an_cfg;
  PipelineFlags an_flags;
  std::string an_input;
  auto* an = app.add_subcommand("analyze", "Full EEG pipeline over the session timeline");
  an->add_option("input", an_input, "EEG CSV with header sample,F3,F4,...")->required();
  add_config_flags(an, an_cfg, true);
  add_pipeline_flags(an, an_flags, an_cfg);

  SynthFlags sy;
  auto* syn = app.add_subcommand("synth", "Write a synthetic series");
  syn->add_option("kind", sy.kind, "cascade, fgn, noise, tone or eeg")
      ->required()
      ->check(CLI::IsMember({"cascade", "fgn", "noise", "tone", "eeg"}));
  syn->add_option("out", sy.out, "Output CSV (.wav for tone and noise)")->required();
  syn->add_option("--k", sy.k, "Cascade depth (length 2^k)");
  syn->add_option("--a", sy.a, "Cascade multiplier");
  syn->add_option("--n", sy.n, "Length for fgn and noise");
  syn->add_option("--hurst", sy.hurst, "Hurst exponent for fgn");
  syn->add_option("--seed", sy.seed, "Random seed");
  syn->add_option("--freq", sy.freq, "Tone frequency in Hz");
  syn->add_option("--fs", sy.fs, "Sampling rate in Hz");
  syn->add_option("--duration", sy.duration, "Duration in seconds");
  syn->add_option("--amplitude", sy.amplitude, "Tone amplitude");
  syn->add_option("--clips", sy.clips, "Clips in the timeline that sets the eeg duration");
  syn->add_option("--channels", sy.channels, "EEG channel labels, comma separated")->delimiter(',');

  std::string li_input;
  std::optional<std::string> li_out;
  auto* li = app.add_subcommand("listening", "Non-recognition table from response sheets");
  li->add_option("input", li_input, "CSV subject,clip,part1..part5")->required();
  li->add_option("-o,--out", li_out, "Output CSV (default stdout)");

  ConfigFlags re_cfg;
  std::vector<std::string> re_inputs;
  auto* re = app.add_subcommand("report", "Merge per-subject report.json files");
  re->add_option("inputs", re_inputs, "report.json files")->required();
  re->add_option("--outdir", re_cfg.outdir, "Output directory (env MFX_OUTDIR)");

  if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
      app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "mfx: unknown subcommand '" << args.front() << "'\n\n" << app.help();
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "mfx: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (split->parsed()) {
      RunConfig cfg = resolve(split_cfg, nullptr);
      if (target_rms) cfg.target_rms = *target_rms;
      validate(cfg);
      echo(err, "split-bands", {{"target_rms", cfg.target_rms}, {"outdir", cfg.outdir}});
      return cmd_split_bands(split_input, cfg, out);
    }
    if (mf->parsed()) {
      const RunConfig cfg = resolve(mf_cfg, nullptr);
      echo(err, "mfdfa", echo_config(cfg));
      return cmd_mfdfa(mf_input, cfg, mf_fs, mf_out, mf_fq_csv, out);
    }
    if (an->parsed()) return cmd_analyze(an_input, resolve(an_cfg, &an_flags), an_flags, out, err);
    if (syn->parsed()) return cmd_synth(sy, out, err);
    if (li->parsed()) return cmd_listening(li_input, li_out, out, err);
    if (re->parsed()) return cmd_report(re_inputs, resolve(re_cfg, nullptr), out, err);
  } catch (const Error& e) {
    err << "mfx: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "mfx: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace mfx::cli
