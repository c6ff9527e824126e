#pragma once

#include <cmath>
#include <random>

#include "skitrain/motion.hpp"
#include "support.hpp"

namespace testsupport {

// A skeleton assembled from known rotations together with the nine angle
// deltas it must produce against upright_reference().
struct AngleCase {
  skitrain::SkeletonFrame frame;
  skitrain::AngleValues expected{};
};

inline AngleCase random_angle_case(std::mt19937_64& rng) {
  using J = skitrain::JointName;
  using skitrain::Angle;
  constexpr double pi = 3.14159265358979323846;
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto horizontal = [](double yaw, double length, double rise) {
    return Vec3{length * std::cos(yaw), rise, length * std::sin(yaw)};
  };
  auto random_perpendicular = [&](const Vec3& v) { return rotate(perpendicular(v), v, u(-pi, pi)); };

  const double alpha = u(-0.6, 0.6), beta = u(-0.6, 0.6);
  const double hipYaw = u(-pi, pi), twist = u(-1.0, 1.0), headRot = u(-1.0, 1.0);
  const double tilt = u(0.01, 1.0);

  AngleCase out;
  auto set = [&](J j, Vec3 p) { out.frame[j] = {p, skitrain::Confidence::HIGH}; };
  const Vec3 pelvis{u(-1, 1), u(0.5, 1.5), u(-1, 1)};
  const Vec3 b{std::sin(alpha), std::sqrt(1.0 - std::sin(alpha) * std::sin(alpha) - std::sin(beta) * std::sin(beta)),
               -std::sin(beta)};
  const Vec3 chest = rotate(b, random_perpendicular(b), u(-0.3, 0.3));
  set(J::PELVIS, pelvis);
  set(J::SPINE_NAVEL, pelvis + chest * 0.15);
  set(J::SPINE_CHEST, pelvis + chest * 0.3);
  set(J::NECK, pelvis + b * 0.5);
  const Vec3 headDir = rotate(b, random_perpendicular(b), tilt);
  const Vec3 head = pelvis + b * 0.5 + headDir * 0.15;
  set(J::HEAD, head);
  set(J::NOSE, head + Vec3{0, 0, -0.1});

  const Vec3 hips = horizontal(hipYaw, 0.2, u(-0.05, 0.05));
  const Vec3 shoulders = horizontal(hipYaw + twist, 0.4, u(-0.08, 0.08));
  const Vec3 ears = horizontal(hipYaw + twist + headRot, 0.14, u(-0.03, 0.03));
  set(J::EAR_L, head - ears * 0.5);
  set(J::EAR_R, head + ears * 0.5);
  set(J::EYE_L, head - ears * 0.2);
  set(J::EYE_R, head + ears * 0.2);

  double hipAngle[2], kneeFlex[2];
  for (int side = 0; side < 2; ++side) {
    const bool left = side == 0;
    const double s = left ? -0.5 : 0.5;
    hipAngle[side] = u(pi / 2, pi - 0.01);
    kneeFlex[side] = u(0.01, 2.0);
    const Vec3 hip = pelvis + hips * s;
    const Vec3 thigh = rotate(chest, random_perpendicular(chest), hipAngle[side]);
    const Vec3 shank = rotate(thigh, random_perpendicular(thigh), kneeFlex[side]);
    const Vec3 knee = hip + thigh * 0.45;
    const Vec3 ankle = knee + shank * 0.45;
    const Vec3 shoulder = pelvis + b * 0.45 + shoulders * s;
    set(left ? J::HIP_L : J::HIP_R, hip);
    set(left ? J::KNEE_L : J::KNEE_R, knee);
    set(left ? J::ANKLE_L : J::ANKLE_R, ankle);
    set(left ? J::FOOT_L : J::FOOT_R, ankle + Vec3{0, -0.05, -0.1});
    set(left ? J::CLAVICLE_L : J::CLAVICLE_R, pelvis + b * 0.45 + shoulders * (s * 0.3));
    set(left ? J::SHOULDER_L : J::SHOULDER_R, shoulder);
    set(left ? J::ELBOW_L : J::ELBOW_R, shoulder + Vec3{0, -0.25, 0});
    set(left ? J::WRIST_L : J::WRIST_R, shoulder + Vec3{0, -0.5, 0});
    set(left ? J::HAND_L : J::HAND_R, shoulder + Vec3{0, -0.55, 0});
    set(left ? J::HANDTIP_L : J::HANDTIP_R, shoulder + Vec3{0, -0.6, 0});
    set(left ? J::THUMB_L : J::THUMB_R, shoulder + Vec3{0, -0.57, -0.02});
  }

  auto at = [&](Angle a) -> std::optional<double>& { return out.expected[static_cast<std::size_t>(a)]; };
  at(Angle::Sagittal) = alpha;
  at(Angle::Frontal) = beta;
  // Interior knee angle is pi - flex; upright it is pi.
  at(Angle::KneeL) = -kneeFlex[0];
  at(Angle::KneeR) = -kneeFlex[1];
  at(Angle::HipL) = hipAngle[0] - pi;
  at(Angle::HipR) = hipAngle[1] - pi;
  at(Angle::UpperBodyTwist) = twist;
  at(Angle::HeadTilt) = tilt;
  at(Angle::HeadRotation) = headRot;
  return out;
}

inline skitrain::SkeletonFrame mirrored(const skitrain::SkeletonFrame& f) {
  skitrain::SkeletonFrame out = f;
  for (std::size_t i = 0; i < skitrain::kJointCount; ++i) {
    const auto j = skitrain::joint_at(i);
    auto s = f[j];
    s.pos.x = -s.pos.x;
    out[skitrain::mirror_joint(j)] = s;
  }
  return out;
}

}  // namespace testsupport
