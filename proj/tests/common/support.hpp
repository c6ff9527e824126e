#pragma once

#include <cmath>
#include <random>

#include "skitrain/motion.hpp"

namespace testsupport {

using skitrain::Vec3;

// Rodrigues rotation, written out independently of skitrain::rotation_about.
inline Vec3 rotate(const Vec3& v, Vec3 axis, double angle) {
  const double n = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
  axis = {axis.x / n, axis.y / n, axis.z / n};
  const double c = std::cos(angle), s = std::sin(angle);
  const double d = axis.x * v.x + axis.y * v.y + axis.z * v.z;
  const Vec3 cr{axis.y * v.z - axis.z * v.y, axis.z * v.x - axis.x * v.z, axis.x * v.y - axis.y * v.x};
  return {v.x * c + cr.x * s + axis.x * d * (1 - c), v.y * c + cr.y * s + axis.y * d * (1 - c),
          v.z * c + cr.z * s + axis.z * d * (1 - c)};
}

// Any unit vector perpendicular to v.
inline Vec3 perpendicular(const Vec3& v) {
  const Vec3 helper = std::abs(v.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 p = v.cross(helper);
  return p / p.norm();
}

// Standing skeleton facing -z with hips along +x; every joint HIGH.
inline skitrain::SkeletonFrame upright_skeleton(double t = 0.0, int camera = 1) {
  using J = skitrain::JointName;
  skitrain::SkeletonFrame f;
  f.t = t;
  f.camera = camera;
  auto set = [&](J j, Vec3 p) { f[j] = {p, skitrain::Confidence::HIGH}; };
  set(J::PELVIS, {0, 1.0, 0});
  set(J::SPINE_NAVEL, {0, 1.15, 0});
  set(J::SPINE_CHEST, {0, 1.3, 0});
  set(J::NECK, {0, 1.5, 0});
  set(J::HEAD, {0, 1.65, 0});
  set(J::NOSE, {0, 1.65, -0.1});
  set(J::EYE_L, {-0.03, 1.68, -0.08});
  set(J::EYE_R, {0.03, 1.68, -0.08});
  set(J::EAR_L, {-0.07, 1.65, 0});
  set(J::EAR_R, {0.07, 1.65, 0});
  for (int side : {-1, 1}) {
    const bool left = side < 0;
    const double s = side;
    set(left ? J::CLAVICLE_L : J::CLAVICLE_R, {0.05 * s, 1.45, 0});
    set(left ? J::SHOULDER_L : J::SHOULDER_R, {0.2 * s, 1.45, 0});
    set(left ? J::ELBOW_L : J::ELBOW_R, {0.22 * s, 1.2, 0});
    set(left ? J::WRIST_L : J::WRIST_R, {0.23 * s, 0.95, 0});
    set(left ? J::HAND_L : J::HAND_R, {0.23 * s, 0.9, 0});
    set(left ? J::HANDTIP_L : J::HANDTIP_R, {0.23 * s, 0.85, 0});
    set(left ? J::THUMB_L : J::THUMB_R, {0.21 * s, 0.88, -0.02});
    set(left ? J::HIP_L : J::HIP_R, {0.1 * s, 1.0, 0});
    set(left ? J::KNEE_L : J::KNEE_R, {0.1 * s, 0.55, 0});
    set(left ? J::ANKLE_L : J::ANKLE_R, {0.1 * s, 0.1, 0});
    set(left ? J::FOOT_L : J::FOOT_R, {0.1 * s, 0.03, -0.12});
  }
  return f;
}

// Axes and raw angle values of upright_skeleton(), known analytically.
inline skitrain::ReferenceFrame upright_reference() {
  skitrain::ReferenceFrame ref;
  ref.origin = {0, 1.0, 0};
  ref.up = {0, 1, 0};
  ref.lateral = {1, 0, 0};
  ref.forward = {0, 0, -1};
  const double pi = 3.14159265358979323846;
  ref.referenceAngles = {0.0, 0.0, pi, pi, pi, pi, 0.0, 0.0, 0.0};
  return ref;
}

}  // namespace testsupport
