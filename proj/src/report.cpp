#include "mfx/report.hpp"

#include "mfx/csv.hpp"
#include "mfx/error.hpp"
#include "mfx/protocol.hpp"
#include "mfx/series.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

namespace mfx::report {
namespace {

int condition_rank(const std::string& c) {
  if (c == "rest") return 0;
  if (c == "original") return 1;
  if (c.rfind("band", 0) == 0) return 1 + std::stoi(c.substr(4));
  return 100;
}

int rhythm_rank(const std::string& r) {
  if (r == "alpha") return 0;
  if (r == "theta") return 1;
  if (r == "gamma") return 2;
  return 100;
}

int electrode_rank(const std::string& e) {
  const auto& a = protocol::analyzed_electrodes();
  const auto it = std::find(a.begin(), a.end(), e);
  return it == a.end() ? 1000 : static_cast<int>(it - a.begin());
}

auto sort_key(const CellKey& k) {
  return std::make_tuple(k.clip, condition_rank(k.condition), k.condition,
                         electrode_rank(k.electrode), k.electrode, rhythm_rank(k.rhythm),
                         k.rhythm);
}

struct KeyLess {
  bool operator()(const CellKey& a, const CellKey& b) const { return sort_key(a) < sort_key(b); }
};

std::string optional_g6(const std::optional<double>& v) {
  return v ? io::format_g6(*v) : std::string();
}

nlohmann::json record_json(const WidthRecord& r) {
  return {{"subject", r.subject_id},
          {"electrode", r.electrode},
          {"rhythm", r.rhythm},
          {"clip", r.clip},
          {"condition", r.condition},
          {"W", r.W},
          {"A", r.A},
          {"B", r.B},
          {"alpha0", r.alpha0},
          {"h2_r2", r.h2_r_squared},
          {"non_concave", r.non_concave},
          {"monofractal_degenerate", r.monofractal_degenerate}};
}

nlohmann::json cell_json(const CellSummary& c) {
  nlohmann::json j{{"n_subjects", c.width.n},
                   {"w_mean", c.width.mean},
                   {"w_sd", c.width.sd},
                   {"flags", c.flags()}};
  if (c.delta) {
    j["delta_mean"] = c.delta->mean;
    j["delta_sd"] = c.delta->sd;
    j["n_delta"] = c.delta->n;
  } else {
    j["delta_mean"] = nullptr;
    j["delta_sd"] = nullptr;
    j["n_delta"] = 0;
  }
  return j;
}

}  // namespace

double baseline_delta(double w_cond, double w_rest) { return w_cond - w_rest; }

MeanSd mean_sd(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyCell, "cannot average an empty cell");
  MeanSd out;
  out.n = values.size();
  const auto n = static_cast<double>(values.size());
  out.mean = compensated_sum(values) / n;
  KahanSum sq;
  for (double v : values) sq.add((v - out.mean) * (v - out.mean));
  out.sd = std::sqrt(sq.value() / n);
  return out;
}

std::string CellSummary::flags() const {
  std::string out;
  const auto add = [&](const char* f) {
    if (!out.empty()) out += ';';
    out += f;
  };
  if (missing_subjects) add("missing_subjects");
  if (no_baseline) add("no_baseline");
  if (non_concave) add("non_concave");
  return out;
}

std::vector<CellSummary> average_subjects(const std::vector<WidthRecord>& records) {
  std::set<std::string> subjects;
  // baseline[(subject, electrode, rhythm)] = W
  std::map<std::tuple<std::string, std::string, std::string>, double> baseline;
  // cell -> subject -> record (std::map keeps subjects sorted: order-independent sums)
  std::map<CellKey, std::map<std::string, const WidthRecord*>, KeyLess> cells;
  for (const auto& r : records) {
    subjects.insert(r.subject_id);
    if (r.condition == "rest") baseline[{r.subject_id, r.electrode, r.rhythm}] = r.W;
    auto& slot = cells[CellKey{r.clip, r.condition, r.electrode, r.rhythm}][r.subject_id];
    if (slot != nullptr) {
      throw Error(Errc::InvalidArgument, "duplicate record for subject '" + r.subject_id +
                                             "', " + r.electrode + "/" + r.rhythm + "/" +
                                             r.condition + " clip " + std::to_string(r.clip));
    }
    slot = &r;
  }

  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (const auto& [key, by_subject] : cells) {
    CellSummary cell;
    cell.key = key;
    std::vector<double> widths;
    std::vector<double> deltas;
    for (const auto& [subject, rec] : by_subject) {
      widths.push_back(rec->W);
      cell.non_concave = cell.non_concave || rec->non_concave;
      if (key.condition == "rest") continue;
      const auto base = baseline.find({subject, key.electrode, key.rhythm});
      if (base != baseline.end()) deltas.push_back(baseline_delta(rec->W, base->second));
    }
    cell.width = mean_sd(widths);
    cell.missing_subjects = by_subject.size() < subjects.size();
    if (key.condition != "rest") {
      if (deltas.empty()) {
        cell.no_baseline = true;
      } else {
        cell.delta = mean_sd(deltas);
        cell.no_baseline = deltas.size() < by_subject.size();
      }
    }
    out.push_back(std::move(cell));
  }
  return out;
}

std::string to_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream os;
  os << "clip,condition,electrode,rhythm,n_subjects,w_mean,w_sd,delta_mean,delta_sd,n_delta,flags\n";
  for (const auto& c : cells) {
    if (c.key.condition == "rest") continue;
    os << c.key.clip << ',' << c.key.condition << ',' << c.key.electrode << ',' << c.key.rhythm
       << ',' << c.width.n << ',' << io::format_g6(c.width.mean) << ','
       << io::format_g6(c.width.sd) << ','
       << optional_g6(c.delta ? std::optional<double>(c.delta->mean) : std::nullopt) << ','
       << optional_g6(c.delta ? std::optional<double>(c.delta->sd) : std::nullopt) << ','
       << (c.delta ? c.delta->n : 0) << ',' << c.flags() << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const AnalysisReport& report) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["metadata"] = report.metadata;
  j["records"] = nlohmann::json::array();
  std::vector<const WidthRecord*> sorted;
  for (const auto& r : report.records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const WidthRecord* a, const WidthRecord* b) {
    return std::make_tuple(sort_key({a->clip, a->condition, a->electrode, a->rhythm}),
                           a->subject_id) <
           std::make_tuple(sort_key({b->clip, b->condition, b->electrode, b->rhythm}),
                           b->subject_id);
  });
  for (const auto* r : sorted) j["records"].push_back(record_json(*r));

  nlohmann::json cells = nlohmann::json::object();
  nlohmann::json baseline = nlohmann::json::object();
  for (const auto& c : average_subjects(report.records)) {
    if (c.key.condition == "rest") {
      baseline[c.key.electrode][c.key.rhythm] = cell_json(c);
    } else {
      cells[std::to_string(c.key.clip)][c.key.condition][c.key.electrode][c.key.rhythm] =
          cell_json(c);
    }
  }
  j["baseline"] = std::move(baseline);
  j["cells"] = std::move(cells);
  return j;
}

AnalysisReport from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSchemaVersion) {
      throw Error(Errc::ParseError, "unsupported report schema '" +
                                        j.at("schema").get<std::string>() + "'");
    }
    AnalysisReport report;
    report.metadata = j.value("metadata", nlohmann::json::object());
    for (const auto& r : j.at("records")) {
      WidthRecord w;
      w.subject_id = r.at("subject").get<std::string>();
      w.electrode = r.at("electrode").get<std::string>();
      w.rhythm = r.at("rhythm").get<std::string>();
      w.clip = r.at("clip").get<int>();
      w.condition = r.at("condition").get<std::string>();
      w.W = r.at("W").get<double>();
      w.A = r.at("A").get<double>();
      w.B = r.at("B").get<double>();
      w.alpha0 = r.at("alpha0").get<double>();
      w.h2_r_squared = r.at("h2_r2").get<double>();
      w.non_concave = r.at("non_concave").get<bool>();
      w.monofractal_degenerate = r.at("monofractal_degenerate").get<bool>();
      report.records.push_back(std::move(w));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("report JSON: ") + e.what());
  }
}

std::map<std::string, std::string> plot_data(const std::vector<CellSummary>& cells) {
  std::vector<std::string> rhythms;
  for (const auto& c : cells) {
    if (std::find(rhythms.begin(), rhythms.end(), c.key.rhythm) == rhythms.end()) {
      rhythms.push_back(c.key.rhythm);
    }
  }
  std::sort(rhythms.begin(), rhythms.end(), [](const std::string& a, const std::string& b) {
    return std::make_tuple(rhythm_rank(a), a) < std::make_tuple(rhythm_rank(b), b);
  });

  // electrode -> (clip, condition) -> rhythm -> delta
  std::map<std::string,
           std::map<std::tuple<int, int, std::string>, std::map<std::string, std::optional<double>>>>
      grid;
  for (const auto& c : cells) {
    if (c.key.condition == "rest") continue;
    grid[c.key.electrode][{c.key.clip, condition_rank(c.key.condition), c.key.condition}]
        [c.key.rhythm] = c.delta ? std::optional<double>(c.delta->mean) : std::nullopt;
  }

  std::map<std::string, std::string> out;
  for (const auto& [electrode, rows] : grid) {
    std::ostringstream os;
    os << "clip,condition";
    for (const auto& r : rhythms) os << ',' << r;
    os << '\n';
    for (const auto& [row_key, values] : rows) {
      os << std::get<0>(row_key) << ',' << std::get<2>(row_key);
      for (const auto& r : rhythms) {
        const auto it = values.find(r);
        os << ',' << (it == values.end() ? std::string() : optional_g6(it->second));
      }
      os << '\n';
    }
    out[electrode] = os.str();
  }
  return out;
}

void emit_report(const AnalysisReport& report, const std::filesystem::path& outdir) {
  if (report.records.empty()) throw Error(Errc::EmptyReport, "report has no records");
  const auto cells = average_subjects(report.records);
  const std::string csv = to_csv(cells);
  const std::string json = to_json(report).dump(2) + "\n";
  const auto plots = plot_data(cells);

  std::error_code ec;
  std::filesystem::create_directories(outdir / "plotdata", ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create " + (outdir / "plotdata").string());
  io::write_text_file(outdir / "report.csv", csv);
  io::write_text_file(outdir / "report.json", json);
  for (const auto& [electrode, text] : plots) {
    io::write_text_file(outdir / "plotdata" / (electrode + ".csv"), text);
  }
}

}  // namespace mfx::report
