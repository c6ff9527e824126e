#include "skitrain/geometry.hpp"

#include <algorithm>

namespace skitrain {

Mat3 rotation_about(const Vec3& axis, double angle) {
  const Vec3 k = axis.normalized();
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double v = 1.0 - c;
  return {{c + k.x * k.x * v, k.x * k.y * v - k.z * s, k.x * k.z * v + k.y * s,
           k.y * k.x * v + k.z * s, c + k.y * k.y * v, k.y * k.z * v - k.x * s,
           k.z * k.x * v - k.y * s, k.z * k.y * v + k.x * s, c + k.z * k.z * v}};
}

Mat3 matrix_from_euler_xyz(const Vec3& euler) {
  return rotation_x(euler.x) * rotation_y(euler.y) * rotation_z(euler.z);
}

Vec3 euler_xyz_from_matrix(const Mat3& r) {
  const double sb = std::clamp(r(0, 2), -1.0, 1.0);
  const double b = std::asin(sb);
  if (std::abs(sb) > 1.0 - 1e-12) {
    // Gimbal lock: fold the Z rotation into X.
    return {wrap_angle(std::atan2(r(2, 1), r(1, 1))), b, 0.0};
  }
  return {wrap_angle(std::atan2(-r(1, 2), r(2, 2))), b, wrap_angle(std::atan2(-r(0, 1), r(0, 0)))};
}

}  // namespace skitrain
