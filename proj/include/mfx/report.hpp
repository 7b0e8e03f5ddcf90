#pragma once

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mfx::report {

inline constexpr const char* kSchemaVersion = "mfx-report/1";

// One spectral width per (subject, electrode, rhythm, condition).
struct WidthRecord {
  std::string subject_id;
  std::string electrode;
  std::string rhythm;     // alpha, theta, gamma
  int clip = 0;           // 0 for the baseline rest
  std::string condition;  // rest, original, band1 .. band5
  double W = 0.0;
  double A = 0.0;
  double B = 0.0;
  double alpha0 = 0.0;
  double h2_r_squared = 0.0;
  bool non_concave = false;
  bool monofractal_degenerate = false;

  bool operator==(const WidthRecord&) const = default;
};

struct AnalysisReport {
  std::vector<WidthRecord> records;
  nlohmann::json metadata = nlohmann::json::object();
};

// Signed change from the resting baseline (positive = complexity rise).
double baseline_delta(double w_cond, double w_rest);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population
  std::size_t n = 0;
};

MeanSd mean_sd(std::span<const double> values);

struct CellKey {
  int clip = 0;
  std::string condition;
  std::string electrode;
  std::string rhythm;
};

struct CellSummary {
  CellKey key;
  MeanSd width;
  std::optional<MeanSd> delta;  // absent when no subject has a baseline for the cell
  bool missing_subjects = false;
  bool no_baseline = false;
  bool non_concave = false;

  std::string flags() const;
};

// Per (clip, condition, electrode, rhythm): subject mean and SD of W and of
// W minus the same subject's baseline W. Output order is deterministic and
// independent of record order. Baseline (rest) cells come first with clip 0.
std::vector<CellSummary> average_subjects(const std::vector<WidthRecord>& records);

// Stimulus cells only: clip,condition,electrode,rhythm,n_subjects,w_mean,w_sd,
// delta_mean,delta_sd,n_delta,flags (6 significant digits).
std::string to_csv(const std::vector<CellSummary>& cells);

nlohmann::json to_json(const AnalysisReport& report);
AnalysisReport from_json(const nlohmann::json& j);

// electrode -> CSV "clip,condition,<rhythm...>" of mean baseline deltas.
std::map<std::string, std::string> plot_data(const std::vector<CellSummary>& cells);

// Writes report.csv, report.json and plotdata/<electrode>.csv under outdir.
void emit_report(const AnalysisReport& report, const std::filesystem::path& outdir);

}  // namespace mfx::report
