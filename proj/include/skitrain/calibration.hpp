#pragma once

#include <array>
#include <span>
#include <string_view>

#include "skitrain/motion.hpp"

namespace skitrain {

/// Signed movement ranges captured during the lean prompts. All ranges are
/// stored as positive magnitudes; xCenter/zCenter are the upright-window
/// mean head position that deviations are measured from.
struct CalibrationProfile {
  double xLeft = 0.0;
  double xRight = 0.0;
  double zFront = 0.0;
  double zBack = 0.0;
  double yUpright = 0.0;
  double stanceOffset = 0.0;
  double xCenter = 0.0;
  double zCenter = 0.0;

  /// Throws InvalidInput unless the six range values are positive and finite.
  void validate() const;
  /// Head height at or below which the player counts as crouched.
  double crouch_height() const { return yUpright - stanceOffset; }

  friend bool operator==(const CalibrationProfile&, const CalibrationProfile&) = default;
};

struct ControlInput {
  double uLat = 0.0;   // [-1, 1], negative = left
  double uFore = 0.0;  // [-1, 1], positive = forward lean
  bool upright = false;

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

enum class CalibrationPhase : int { Upright, Left, Right, Front, Back };
inline constexpr std::size_t kCalibrationPhases = 5;

std::string_view calibration_phase_name(CalibrationPhase p);

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

/// Prompt windows, indexed by CalibrationPhase. Inclusive bounds.
struct CalibrationSchedule {
  std::array<TimeWindow, kCalibrationPhases> windows{};

  TimeWindow& operator[](CalibrationPhase p) { return windows[static_cast<std::size_t>(p)]; }
  const TimeWindow& operator[](CalibrationPhase p) const { return windows[static_cast<std::size_t>(p)]; }
};

struct CalibrationOptions {
  double stanceFraction = 0.25;
  std::size_t minSamplesPerWindow = 10;
  double minRange = 0.01;  // m
};

CalibrationProfile run_calibration(std::span<const HeadPoseSample> headStream, const CalibrationSchedule& schedule,
                                   const CalibrationOptions& options = {});

/// Piecewise-linear asymmetric scaling of a head pose into control input.
ControlInput normalize_input(const HeadPoseSample& pose, const CalibrationProfile& profile);

/// Inverse of the lateral/fore scaling for in-range inputs: head offsets
/// (dx, dz) from the calibrated center that produce (uLat, uFore).
double denormalize_lateral(double uLat, const CalibrationProfile& profile);
double denormalize_fore(double uFore, const CalibrationProfile& profile);

}  // namespace skitrain
