#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skitrain/body_angles.hpp"
#include "skitrain/calibration.hpp"
#include "skitrain/stats.hpp"

namespace skitrain {

/// Everything the analysis needs from one run.
struct RunAnalysisInput {
  std::string id;
  int subject = 0;
  int level = 1;
  bool avatar = true;
  CalibrationProfile profile;
  std::vector<HeadPoseSample> head;
  AngleSeries angles;
};

/// Head channels as deviations from the calibrated upright head position,
/// aligned with the angle series at `rate`.
AlignedSeries align_run(const RunAnalysisInput& run, double rate = 25.0);

using CellGrid = std::array<std::array<std::optional<MeanStd>, kAngleCount>, kPoseChannelCount>;

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
};

struct AnalysisReport {
  std::size_t runCount = 0;
  double rate = 25.0;
  /// Correlations over all runs' samples pooled together.
  CorrelationMatrix pooled;
  /// Mean +- std of per-run |r| per cell.
  CellGrid meanAbsR;
  std::vector<std::pair<std::string, CorrelationMatrix>> perRun;
  LevelSummary summary;

  /// Head x deviation (m) against sagittal-plane angle (deg), pooled.
  std::optional<RegressionBand> band;
  std::vector<ScatterPoint> scatter;
};

AnalysisReport analyze_runs(std::span<const RunAnalysisInput> runs, double rate = 25.0);

/// Category of a cell in the rendered matrix, from the mean per-run |r|.
std::optional<CorrelationCategory> reported_category(const AnalysisReport& report, PoseChannel c, Angle a);

std::string report_markdown(const AnalysisReport& report);
std::string correlation_csv(const AnalysisReport& report);
std::string correlation_runs_csv(const AnalysisReport& report);
std::string table1_csv(const AnalysisReport& report);
std::string table2_csv(const AnalysisReport& report);
std::string plot_data_json(const AnalysisReport& report);

}  // namespace skitrain
