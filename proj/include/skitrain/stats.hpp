#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "skitrain/body_angles.hpp"
#include "skitrain/motion.hpp"

namespace skitrain {

// ---------------------------------------------------------------------------
// Special functions

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);
/// Student-t CDF with `df` degrees of freedom.
double student_t_cdf(double t, double df);
/// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);
/// Inverse CDF; p in (0, 1).
double student_t_quantile(double p, double df);

// ---------------------------------------------------------------------------
// Correlation

struct PearsonResult {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Throws InsufficientData for n < 3 and ZeroVariance for a constant series.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);
/// Pairs where either side is absent are dropped first.
PearsonResult pearson(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y);

enum class CorrelationCategory : int { Negligible, Low, Moderate, High, VeryHigh };

std::string_view correlation_category_name(CorrelationCategory c);
/// Buckets at 0.3, 0.5, 0.7, 0.9; boundaries belong to the upper bucket.
CorrelationCategory classify_correlation(double absR);

enum class PoseChannel : int { X, Y, Z, EulerX, EulerY, EulerZ };
inline constexpr std::size_t kPoseChannelCount = 6;

std::string_view pose_channel_name(PoseChannel c);
inline PoseChannel pose_channel_at(std::size_t i) { return static_cast<PoseChannel>(i); }

struct CorrelationCell {
  PoseChannel channel = PoseChannel::X;
  Angle angle = Angle::Sagittal;
  double r = 0.0;
  double absR = 0.0;
  std::size_t n = 0;
  double p = 1.0;
  CorrelationCategory category = CorrelationCategory::Negligible;
};

/// Head channels and angle series sampled on one uniform clock.
struct AlignedSeries {
  std::vector<double> times;
  std::array<std::vector<std::optional<double>>, kPoseChannelCount> head;
  std::array<std::vector<std::optional<double>>, kAngleCount> angles;

  std::size_t size() const { return times.size(); }
  void append(const AlignedSeries& other);
};

struct CorrelationMatrix {
  std::array<std::array<std::optional<CorrelationCell>, kAngleCount>, kPoseChannelCount> cells{};

  const std::optional<CorrelationCell>& at(PoseChannel c, Angle a) const {
    return cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)];
  }
};

/// One Pearson cell per (pose channel, angle) pair. Cells whose series are
/// constant or too short are left absent.
CorrelationMatrix correlation_matrix(const AlignedSeries& series);

/// Head trace and angle series brought onto a common clock. The head is
/// interpolated at `rate`; angles use gap-aware interpolation. The clock
/// spans the overlap of both inputs.
AlignedSeries align_series(std::span<const HeadPoseSample> head, const AngleSeries& angles, double rate = 25.0);

// ---------------------------------------------------------------------------
// Regression

struct RegressionBand {
  double slope = 0.0;
  double intercept = 0.0;
  double residualStd = 0.0;
  double xMean = 0.0;
  double sxx = 0.0;
  std::size_t n = 0;
  double level = 0.95;
  double tCritical = 0.0;

  double predict(double x) const { return intercept + slope * x; }
  double half_width(double x) const;
  double lower(double x) const { return predict(x) - half_width(x); }
  double upper(double x) const { return predict(x) + half_width(x); }
};

/// OLS fit with a two-sided prediction interval at `level`.
RegressionBand fit_prediction_interval(std::span<const double> x, std::span<const double> y, double level = 0.95);

// ---------------------------------------------------------------------------
// Per-level summaries

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> values);

/// Inputs for one run.
struct RunRecord {
  int level = 1;
  bool avatar = true;
  /// Head positions during the run (the head trace, not the player state).
  std::vector<Vec3> headPositions;
  AngleSeries angles;
};

/// Largest |value| per angle over a series, in degrees. Absent when an
/// angle never has a value.
std::array<std::optional<double>, kAngleCount> max_abs_movement_deg(const AngleSeries& series);

struct LevelSummary {
  /// Mean +- std of per-run maximum |movement| per angle (deg), by level.
  std::map<int, std::array<std::optional<MeanStd>, kAngleCount>> angleMax;
  /// Mean +- population std across angles of the percentage change of each
  /// angle's mean maximum relative to level 1. Missing for level 1 itself.
  std::map<int, MeanStd> deviationToLevel1;
  /// Head path length (m) by level and avatar flag.
  std::map<std::pair<int, bool>, MeanStd> headDistance;
  /// Head path length (m) over all levels by avatar flag.
  std::map<bool, MeanStd> headDistanceAverage;
};

LevelSummary level_summary(std::span<const RunRecord> runs);

/// Percentage change of `values` vs `reference`, aggregated across entries
/// present in both. The spread is the population std over those entries.
MeanStd deviation_percent(std::span<const std::optional<double>> values, std::span<const std::optional<double>> reference);

}  // namespace skitrain
