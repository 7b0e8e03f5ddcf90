#include "mfx/config.hpp"

#include "mfx/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace mfx {

std::vector<double> q_grid(const RunConfig& cfg) {
  const double span = cfg.q_max - cfg.q_min;
  const auto steps = static_cast<long long>(std::llround(span / cfg.q_step));
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(steps) + 1);
  for (long long i = 0; i <= steps; ++i) {
    double v = cfg.q_min + static_cast<double>(i) * cfg.q_step;
    if (std::fabs(v) < 1e-12 * cfg.q_step) v = 0.0;  // land exactly on q = 0
    q.push_back(v);
  }
  return q;
}

MfdfaConfig mfdfa_config(const RunConfig& cfg, std::size_t n) {
  MfdfaConfig m;
  m.detrend_order = cfg.detrend_order;
  m.bidirectional = cfg.bidirectional;
  m.q_grid = q_grid(cfg);
  m.scales = cfg.scales.empty() ? default_scales(n, cfg.scale_count, cfg.scale_min) : cfg.scales;
  return m;
}

void validate(const RunConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw Error(Errc::InvalidArgument, msg); };
  if (cfg.detrend_order < 1 || cfg.detrend_order > 3) fail("detrend_order must be 1, 2 or 3");
  if (cfg.scale_min < static_cast<std::size_t>(cfg.detrend_order) + 2) {
    fail("scale_min must be at least detrend_order + 2");
  }
  if (cfg.scale_count < 2) fail("scale_count must be at least 2");
  for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
    if (cfg.scales[i] < static_cast<std::size_t>(cfg.detrend_order) + 2) {
      fail("every scale must be at least detrend_order + 2");
    }
    if (i > 0 && cfg.scales[i] <= cfg.scales[i - 1]) fail("scales must be strictly increasing");
  }
  if (!cfg.scales.empty() && cfg.scales.size() < 2) fail("at least 2 scales are required");
  if (!(cfg.q_step > 0.0) || !(cfg.q_max > cfg.q_min)) fail("q grid needs q_max > q_min and q_step > 0");
  if (q_grid(cfg).size() < 3) fail("q grid needs at least 3 points");
  if (cfg.rhythms.empty()) fail("at least one rhythm is required");
  for (const auto& r : cfg.rhythms) {
    if (!(r.band.low_hz >= 0.0) || !(r.band.high_hz > r.band.low_hz)) {
      fail("rhythm '" + r.band.name + "' has an invalid band");
    }
  }
  for (std::size_t d : cfg.emd_drop) {
    if (d < 1) fail("emd_drop indices are 1-based");
  }
  if (cfg.emd_max_imfs < 1) fail("emd_max_imfs must be at least 1");
  if (cfg.n_clips < 1) fail("n_clips must be at least 1");
  if (cfg.fs_hz && !(*cfg.fs_hz > 0.0)) fail("fs_hz must be positive");
  if (!(cfg.target_rms > 0.0)) fail("target_rms must be positive");
  if (cfg.workers < 1) fail("workers must be at least 1");
  for (const auto& e : cfg.electrodes) {
    const auto& all = protocol::all_electrodes();
    if (std::find(all.begin(), all.end(), e) == all.end()) {
      fail("electrode '" + e + "' is not a 10-20 site");
    }
  }
  const auto timeline = protocol::build_timeline(cfg.n_clips);
  (void)timeline.find(cfg.baseline);
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json rhythms = nlohmann::json::object();
  for (const auto& r : cfg.rhythms) {
    rhythms[rhythm_name(r.rhythm)] = {r.band.low_hz, r.band.high_hz};
  }
  nlohmann::json j;
  j["mfdfa"] = {{"detrend_order", cfg.detrend_order},
                {"scales", cfg.scales},
                {"scale_min", cfg.scale_min},
                {"scale_count", cfg.scale_count},
                {"q_min", cfg.q_min},
                {"q_max", cfg.q_max},
                {"q_step", cfg.q_step},
                {"bidirectional", cfg.bidirectional}};
  j["rhythms"] = rhythms;
  j["rhythm_method"] = method_name(cfg.rhythm_method);
  j["envelope"] = cfg.envelope;
  j["emd"] = {{"enabled", cfg.emd}, {"drop", cfg.emd_drop}, {"max_imfs", cfg.emd_max_imfs}};
  j["baseline"] = cfg.baseline;
  j["n_clips"] = cfg.n_clips;
  j["electrodes"] = cfg.electrodes;
  j["fs_hz"] = cfg.fs_hz ? nlohmann::json(*cfg.fs_hz) : nlohmann::json(nullptr);
  j["target_rms"] = cfg.target_rms;
  j["seed"] = cfg.seed;
  return j;
}

RunConfig from_json(const nlohmann::json& j, RunConfig base) {
  RunConfig c = std::move(base);
  try {
    if (j.contains("mfdfa")) {
      const auto& m = j.at("mfdfa");
      c.detrend_order = m.value("detrend_order", c.detrend_order);
      c.scales = m.value("scales", c.scales);
      c.scale_min = m.value("scale_min", c.scale_min);
      c.scale_count = m.value("scale_count", c.scale_count);
      c.q_min = m.value("q_min", c.q_min);
      c.q_max = m.value("q_max", c.q_max);
      c.q_step = m.value("q_step", c.q_step);
      c.bidirectional = m.value("bidirectional", c.bidirectional);
    }
    if (j.contains("rhythms")) {
      c.rhythms.clear();
      for (const auto& [name, edges] : j.at("rhythms").items()) {
        RhythmSpec r{parse_rhythm(name), {edges.at(0).get<double>(), edges.at(1).get<double>(), name}};
        c.rhythms.push_back(r);
      }
      std::sort(c.rhythms.begin(), c.rhythms.end(), [](const RhythmSpec& a, const RhythmSpec& b) {
        const auto rank = [](Rhythm r) { return r == Rhythm::Alpha ? 0 : r == Rhythm::Theta ? 1 : 2; };
        return rank(a.rhythm) < rank(b.rhythm);
      });
    }
    if (j.contains("rhythm_method")) c.rhythm_method = parse_method(j.at("rhythm_method").get<std::string>());
    c.envelope = j.value("envelope", c.envelope);
    if (j.contains("emd")) {
      const auto& e = j.at("emd");
      c.emd = e.value("enabled", c.emd);
      c.emd_drop = e.value("drop", c.emd_drop);
      c.emd_max_imfs = e.value("max_imfs", c.emd_max_imfs);
    }
    c.baseline = j.value("baseline", c.baseline);
    c.n_clips = j.value("n_clips", c.n_clips);
    c.electrodes = j.value("electrodes", c.electrodes);
    if (j.contains("fs_hz")) {
      c.fs_hz = j.at("fs_hz").is_null() ? std::nullopt : std::optional<double>(j.at("fs_hz").get<double>());
    }
    c.target_rms = j.value("target_rms", c.target_rms);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.outdir = j.value("outdir", c.outdir);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace mfx
