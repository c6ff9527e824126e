#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "skitrain/body_angles.hpp"
#include "skitrain/report.hpp"
#include "skitrain/sim.hpp"
#include "skitrain/subject.hpp"

namespace skitrain {

/// Camera selection, stream fusion, upright reference from frames with
/// t < uprightEnd, and angles for the remaining frames.
AngleSeries extract_angles(std::span<const std::vector<SkeletonFrame>> streams, Confidence minConf = Confidence::MEDIUM,
                           double uprightEnd = 0.0);

struct PipelineOptions {
  int subjects = 10;
  std::uint64_t seed = 1;
  std::vector<int> levels{1, 2, 3};
  /// Run every level with and without the avatar (metadata only).
  bool bothAvatarConditions = true;
  double analysisRate = 25.0;
  Confidence minConf = Confidence::MEDIUM;
  SimParams sim;
};

struct PipelineRun {
  std::string id;
  int subject = 0;
  int level = 1;
  bool avatar = true;
  Level levelData;
  CalibrationProfile profile;
  std::vector<HeadPoseSample> head;
  std::array<std::vector<SkeletonFrame>, 2> cameras;
  AngleSeries angles;
  RunLog log;
};

struct PipelineSubject {
  int index = 0;
  SubjectParams params;
  CalibrationSession calibration;
  CalibrationProfile profile;
};

struct PipelineResult {
  std::vector<PipelineSubject> subjects;
  std::vector<PipelineRun> runs;
  AnalysisReport report;
};

/// Seed of the level a subject plays, so subjects see different slopes.
std::uint64_t subject_level_seed(std::uint64_t seed, int subject, int level);

/// Synthetic cohort: calibrate each subject, play every level with the
/// ideal-skier controller, record skeletons through the kinematic chain,
/// extract angles and analyze.
PipelineResult run_synthetic_pipeline(const PipelineOptions& options);

/// A recorded run: head trace plus optional per-camera skeleton streams.
struct RecordedRunSpec {
  std::string id;
  int level = 1;
  std::uint64_t levelSeed = kDefaultSeed;
  bool avatar = true;
  std::filesystem::path trace;
  std::vector<std::filesystem::path> skeletons;
};

/// Recorded-data variant driven by a manifest JSON:
/// {"runs":[{"id","level","seed","avatar","trace","skeletons":[...]}]}.
/// Relative paths resolve against the manifest's directory.
std::vector<RecordedRunSpec> load_run_manifest(const std::filesystem::path& manifest);
PipelineResult run_recorded_pipeline(const CalibrationProfile& profile, std::span<const RecordedRunSpec> specs,
                                     const PipelineOptions& options);

struct OutputOptions {
  bool skeletons = false;  // skeleton JSONL files are large
};

/// Writes the report, its CSV/JSON companions and all per-run intermediates.
void write_pipeline_outputs(const PipelineResult& result, const std::filesystem::path& dir, const OutputOptions& options = {});

/// Rebuilds the analysis from a directory written by write_pipeline_outputs.
AnalysisReport analyze_output_dir(const std::filesystem::path& dir, double rate = 25.0);

/// Writes report.md, correlation.csv, correlation_runs.csv, table1.csv,
/// table2.csv and plot_data.json into `dir`.
void write_report_files(const AnalysisReport& report, const std::filesystem::path& dir);

}  // namespace skitrain
