#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "skitrain/calibration.hpp"
#include "skitrain/motion.hpp"

// Synthetic test subject: a kinematic chain standing with fixed feet whose
// upper body leans so that the head follows a given trajectory. Produces
// the head-mounted pose stream and two noisy 32-joint camera streams.

namespace skitrain {

struct SubjectParams {
  // Segment lengths (m).
  double trunk = 0.55;  // pelvis to neck
  double neck = 0.2;    // neck to head joint
  double thigh = 0.46;
  double shank = 0.45;
  double hipHalfWidth = 0.1;
  double ankleHalfWidth = 0.14;
  double shoulderHalfWidth = 0.19;
  /// Upright head height (m).
  double headHeight = 1.7;

  // Coupling of the chain to the lateral lean angle.
  double pelvisRoll = 0.3;    // pelvis roll / trunk lean
  double twistGain = 0.45;    // shoulder-vs-hip yaw / trunk lean
  double headTurnGain = 0.35; // head-vs-shoulder yaw / trunk lean
  double headFollow = 0.55;   // head segment tilt / trunk tilt (righting reflex)

  // Comfortable lean limits used during calibration (m).
  double leanLeft = 0.28;
  double leanRight = 0.28;
  double leanFront = 0.2;
  double leanBack = 0.15;

  // Measurement noise (standard deviations).
  double jointNoise = 0.002;   // m, HIGH-confidence joints
  double headNoise = 0.0005;   // m, head-mounted tracker
  double orientNoise = 0.002;  // rad
};

/// Subject `index` of a seeded cohort with varied anthropometry and lean limits.
SubjectParams random_subject(std::uint64_t seed, int index);

/// Chain configuration for one instant.
struct BodyPose {
  double lean = 0.0;      // lateral trunk lean, positive right
  double forward = 0.0;   // fore trunk lean, positive forward
  double pelvisDrop = 0.0;
  Vec3 headOrient;        // Euler XYZ of the head
};

/// Solves the chain so the head sits at `headOffset` from its upright
/// position. Offsets beyond reach are clamped to the chain limits.
BodyPose solve_pose(const SubjectParams& subject, const Vec3& headOffset);

/// Noise-free joint positions for a pose. The upright head is at
/// (0, headHeight, 0) and the subject faces -z.
std::array<Vec3, kJointCount> joint_positions(const SubjectParams& subject, const BodyPose& pose);

struct CalibrationSession {
  std::vector<HeadPoseSample> head;
  CalibrationSchedule schedule;
};

/// Head stream of the lean prompts: upright, left, right, front, back; each
/// lean peaks at the subject's limit in the middle of its window.
CalibrationSession synthesize_calibration(const SubjectParams& subject, std::uint64_t seed, double rate = 50.0);

struct SubjectRecording {
  /// Head-mounted stream: input trajectory plus orientation from the chain.
  std::vector<HeadPoseSample> head;
  /// Camera 1 and camera 2 skeleton streams. Frames with t < 0 belong to
  /// the upright window before the run.
  std::array<std::vector<SkeletonFrame>, 2> cameras;
};

struct RecordingOptions {
  double uprightDuration = 2.0;  // s of upright stance before t = 0
  double skeletonRate = 25.0;    // Hz
  double camera2Offset = 0.004;  // s, clock offset of the second camera
  double dropoutRate = 0.01;     // per joint and frame, reported LOW
};

/// Records a subject following `headTrace`, whose positions are absolute
/// with the upright head at (0, headHeight, 0).
SubjectRecording record_subject(const SubjectParams& subject, std::span<const HeadPoseSample> headTrace, std::uint64_t seed,
                                const RecordingOptions& options = {});

}  // namespace skitrain
