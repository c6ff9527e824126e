#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skitrain/motion.hpp"

namespace skitrain {

/// Nine body-model angles, each a change from the upright reference (rad).
struct AngleSet {
  AngleValues values{};

  const std::optional<double>& operator[](Angle a) const { return values[static_cast<std::size_t>(a)]; }
  std::optional<double>& operator[](Angle a) { return values[static_cast<std::size_t>(a)]; }

  std::optional<double> sagittalPlane() const { return (*this)[Angle::Sagittal]; }
  std::optional<double> frontalPlane() const { return (*this)[Angle::Frontal]; }
  std::optional<double> kneeR() const { return (*this)[Angle::KneeR]; }
  std::optional<double> kneeL() const { return (*this)[Angle::KneeL]; }
  std::optional<double> hipR() const { return (*this)[Angle::HipR]; }
  std::optional<double> hipL() const { return (*this)[Angle::HipL]; }
  std::optional<double> upperBodyTwist() const { return (*this)[Angle::UpperBodyTwist]; }
  std::optional<double> headTilt() const { return (*this)[Angle::HeadTilt]; }
  std::optional<double> headRotation() const { return (*this)[Angle::HeadRotation]; }

  friend bool operator==(const AngleSet&, const AngleSet&) = default;
};

/// Joints each angle depends on.
std::span<const JointName> required_joints(Angle a);

/// Absolute angle values for `frame`, measured against the axes of `axes`
/// (its referenceAngles are ignored). Signs: sagittal positive leaning
/// right, frontal positive leaning forward, twist and head rotation
/// positive for a rightward turn seen from above.
AngleValues raw_angles(const SkeletonFrame& frame, const ReferenceFrame& axes,
                       Confidence minConf = Confidence::MEDIUM);

/// Angles relative to the upright reference. An angle is absent when any
/// of its joints is below `minConf` or its reference value is absent.
AngleSet compute_angles(const SkeletonFrame& frame, const ReferenceFrame& ref,
                        Confidence minConf = Confidence::MEDIUM);

// ---------------------------------------------------------------------------
// Camera selection and confidence filtering

struct CameraAssignment {
  /// Chosen camera id per joint.
  std::array<int, kJointCount> camera{};
  /// Joint had no frame at MEDIUM or better on any camera.
  std::array<bool, kJointCount> untrackable{};

  int operator[](JointName j) const { return camera[index_of(j)]; }
  bool is_untrackable(JointName j) const { return untrackable[index_of(j)]; }
};

/// For every joint, picks the camera whose stream has the largest fraction
/// of frames at MEDIUM or better; ties go to the lower camera id. Each
/// stream must be non-empty and carry a single camera id.
CameraAssignment select_cameras(std::span<const std::vector<SkeletonFrame>> streams);

/// Demotes joints below `minConf` to NONE. Positions are kept.
std::vector<SkeletonFrame> filter_confidence(std::span<const SkeletonFrame> frames, Confidence minConf);

/// Builds one frame sequence on the clock of the lowest-id camera; each
/// joint is taken from its assigned camera's frame nearest in time (within
/// `tolerance` seconds), otherwise marked NONE.
std::vector<SkeletonFrame> fuse_streams(std::span<const std::vector<SkeletonFrame>> streams,
                                        const CameraAssignment& assignment, double tolerance = 0.02);

// ---------------------------------------------------------------------------
// Angle series

struct AngleSeries {
  std::vector<double> times;
  std::vector<AngleSet> angles;

  std::size_t size() const { return times.size(); }
  /// One angle column with gaps.
  std::vector<std::optional<double>> column(Angle a) const;
};

AngleSeries compute_angle_series(std::span<const SkeletonFrame> frames, const ReferenceFrame& ref,
                                 Confidence minConf = Confidence::MEDIUM);

/// CSV `t,sagittal,frontal,kneeR,kneeL,hipR,hipL,twist,headTilt,headRot`,
/// radians, empty cell for absent values.
std::string angle_series_to_csv(const AngleSeries& series);
AngleSeries angle_series_from_csv(const std::string& text);

}  // namespace skitrain
