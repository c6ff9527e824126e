#include "skitrain/calibration.hpp"

#include <algorithm>
#include <string>

namespace skitrain {

std::string_view calibration_phase_name(CalibrationPhase p) {
  switch (p) {
    case CalibrationPhase::Upright: return "upright";
    case CalibrationPhase::Left: return "left";
    case CalibrationPhase::Right: return "right";
    case CalibrationPhase::Front: return "front";
    case CalibrationPhase::Back: return "back";
  }
  return "upright";
}

void CalibrationProfile::validate() const {
  for (double v : {xLeft, xRight, zFront, zBack, yUpright, stanceOffset})
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "calibration values must be positive and finite");
  if (!std::isfinite(xCenter) || !std::isfinite(zCenter)) throw Error(ErrorKind::InvalidInput, "calibration center must be finite");
}

CalibrationProfile run_calibration(std::span<const HeadPoseSample> headStream, const CalibrationSchedule& schedule,
                                   const CalibrationOptions& options) {
  for (std::size_t i = 0; i < kCalibrationPhases; ++i) {
    const auto& w = schedule.windows[i];
    if (!(w.begin <= w.end)) throw Error(ErrorKind::InvalidInput, std::string(calibration_phase_name(static_cast<CalibrationPhase>(i))) + " window is inverted");
    for (std::size_t k = i + 1; k < kCalibrationPhases; ++k) {
      const auto& o = schedule.windows[k];
      if (w.begin <= o.end && o.begin <= w.end) throw Error(ErrorKind::InvalidInput, "calibration windows overlap");
    }
  }

  auto window_samples = [&](CalibrationPhase p) {
    const TimeWindow w = schedule[p];
    std::vector<HeadPoseSample> out;
    for (const auto& s : headStream)
      if (s.t >= w.begin && s.t <= w.end) out.push_back(s);
    if (out.size() < options.minSamplesPerWindow)
      throw Error(ErrorKind::InsufficientCalibrationData,
                  std::string(calibration_phase_name(p)) + " window has " + std::to_string(out.size()) + " samples, need " +
                      std::to_string(options.minSamplesPerWindow));
    return out;
  };

  std::array<std::vector<HeadPoseSample>, kCalibrationPhases> samples;
  for (std::size_t i = 0; i < kCalibrationPhases; ++i) samples[i] = window_samples(static_cast<CalibrationPhase>(i));
  const auto& upright = samples[0];
  Vec3 mean;
  for (const auto& s : upright) mean += s.pos;
  mean = mean / static_cast<double>(upright.size());

  auto max_deviation = [&](CalibrationPhase p, double Vec3::*axis) {
    double best = 0.0;
    for (const auto& s : samples[static_cast<std::size_t>(p)]) best = std::max(best, std::abs(s.pos.*axis - mean.*axis));
    if (best < options.minRange)
      throw Error(ErrorKind::DegenerateRange, std::string(calibration_phase_name(p)) + " range " + std::to_string(best) + " m is below " +
                                                  std::to_string(options.minRange) + " m");
    return best;
  };

  CalibrationProfile profile;
  profile.xLeft = max_deviation(CalibrationPhase::Left, &Vec3::x);
  profile.xRight = max_deviation(CalibrationPhase::Right, &Vec3::x);
  profile.zFront = max_deviation(CalibrationPhase::Front, &Vec3::z);
  profile.zBack = max_deviation(CalibrationPhase::Back, &Vec3::z);
  profile.yUpright = mean.y;
  profile.stanceOffset = options.stanceFraction * 0.5 * (profile.zFront + profile.zBack);
  profile.xCenter = mean.x;
  profile.zCenter = mean.z;
  return profile;
}

ControlInput normalize_input(const HeadPoseSample& pose, const CalibrationProfile& profile) {
  ControlInput in;
  const double dx = pose.pos.x - profile.xCenter;
  in.uLat = dx > 0.0 ? std::min(dx / profile.xRight, 1.0) : std::max(dx / profile.xLeft, -1.0);
  // Forward lean moves the head toward -z.
  const double dz = profile.zCenter - pose.pos.z;
  in.uFore = dz > 0.0 ? std::min(dz / profile.zFront, 1.0) : std::max(dz / profile.zBack, -1.0);
  in.upright = pose.pos.y > profile.crouch_height();
  return in;
}

double denormalize_lateral(double uLat, const CalibrationProfile& profile) {
  return uLat > 0.0 ? uLat * profile.xRight : uLat * profile.xLeft;
}

double denormalize_fore(double uFore, const CalibrationProfile& profile) {
  return uFore > 0.0 ? uFore * profile.zFront : uFore * profile.zBack;
}

}  // namespace skitrain
