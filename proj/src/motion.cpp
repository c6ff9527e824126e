#include "skitrain/motion.hpp"

#include <algorithm>

#include "skitrain/body_angles.hpp"

namespace skitrain {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "PELVIS",     "SPINE_NAVEL", "SPINE_CHEST", "NECK",       "CLAVICLE_L", "SHOULDER_L", "ELBOW_L",
    "WRIST_L",    "HAND_L",      "HANDTIP_L",   "THUMB_L",    "CLAVICLE_R", "SHOULDER_R", "ELBOW_R",
    "WRIST_R",    "HAND_R",      "HANDTIP_R",   "THUMB_R",    "HIP_L",      "KNEE_L",     "ANKLE_L",
    "FOOT_L",     "HIP_R",       "KNEE_R",      "ANKLE_R",    "FOOT_R",     "HEAD",       "NOSE",
    "EYE_L",      "EAR_L",       "EYE_R",       "EAR_R",
};

constexpr std::array<std::string_view, kAngleCount> kAngleKeys = {
    "sagittal", "frontal", "kneeR", "kneeL", "hipR", "hipL", "twist", "headTilt", "headRot",
};

constexpr std::array<std::string_view, kAngleCount> kAngleLabels = {
    "Sagittal Plane", "Frontal Plane", "Right Knee",     "Left Knee",     "Right Hip",
    "Left Hip",       "Up. Body Twist", "Head Tilt",     "Head Rotation",
};

}  // namespace

std::string_view joint_name(JointName j) { return kJointNames[index_of(j)]; }

std::optional<JointName> parse_joint_name(std::string_view s) {
  for (std::size_t i = 0; i < kJointCount; ++i)
    if (kJointNames[i] == s) return joint_at(i);
  return std::nullopt;
}

JointName mirror_joint(JointName j) {
  const std::string_view name = joint_name(j);
  if (name.size() < 2) return j;
  const std::string_view suffix = name.substr(name.size() - 2);
  if (suffix != "_L" && suffix != "_R") return j;
  std::string other(name);
  other.back() = suffix == "_L" ? 'R' : 'L';
  return *parse_joint_name(other);
}

std::string_view confidence_name(Confidence c) {
  switch (c) {
    case Confidence::NONE: return "none";
    case Confidence::LOW: return "low";
    case Confidence::MEDIUM: return "medium";
    case Confidence::HIGH: return "high";
  }
  return "none";
}

std::optional<Confidence> parse_confidence(std::string_view s) {
  if (s == "none") return Confidence::NONE;
  if (s == "low") return Confidence::LOW;
  if (s == "medium") return Confidence::MEDIUM;
  if (s == "high") return Confidence::HIGH;
  return std::nullopt;
}

std::string_view angle_key(Angle a) { return kAngleKeys[static_cast<std::size_t>(a)]; }
std::string_view angle_label(Angle a) { return kAngleLabels[static_cast<std::size_t>(a)]; }

ReferenceFrame ReferenceFrame::transformed(const RigidTransform& tf) const {
  ReferenceFrame out = *this;
  out.origin = tf.apply(origin);
  out.up = tf.apply_direction(up);
  out.forward = tf.apply_direction(forward);
  out.lateral = tf.apply_direction(lateral);
  return out;
}

SkeletonFrame mean_frame(std::span<const SkeletonFrame> frames, Confidence minConf) {
  SkeletonFrame out;
  if (!frames.empty()) {
    out.t = frames.front().t;
    out.camera = frames.front().camera;
  }
  for (std::size_t j = 0; j < kJointCount; ++j) {
    Vec3 sum;
    std::size_t count = 0;
    for (const auto& f : frames) {
      if (f.usable(joint_at(j), minConf)) {
        sum += f.joints[j].pos;
        ++count;
      }
    }
    if (count > 0) {
      out.joints[j].pos = sum / static_cast<double>(count);
      out.joints[j].conf = Confidence::HIGH;
    }
  }
  return out;
}

ReferenceFrame estimate_reference_frame(std::span<const SkeletonFrame> uprightFrames) {
  constexpr std::size_t kMinFrames = 10;
  if (uprightFrames.size() < kMinFrames)
    throw Error(ErrorKind::CalibrationPoseInvalid,
                "need at least 10 upright frames, got " + std::to_string(uprightFrames.size()));

  constexpr std::array kCritical = {JointName::PELVIS, JointName::NECK, JointName::HIP_L, JointName::HIP_R};
  for (JointName j : kCritical) {
    const auto confident = std::count_if(uprightFrames.begin(), uprightFrames.end(), [j](const SkeletonFrame& f) {
      return f.usable(j, Confidence::MEDIUM);
    });
    if (2 * static_cast<std::size_t>(confident) <= uprightFrames.size())
      throw Error(ErrorKind::CalibrationPoseInvalid,
                  std::string(joint_name(j)) + " is confident in only " + std::to_string(confident) + " of " +
                      std::to_string(uprightFrames.size()) + " upright frames");
  }

  // Mean of per-frame vectors, restricted to frames where both ends are confident.
  auto mean_vector = [&](JointName from, JointName to) {
    Vec3 sum;
    std::size_t count = 0;
    for (const auto& f : uprightFrames) {
      if (f.usable(from, Confidence::MEDIUM) && f.usable(to, Confidence::MEDIUM)) {
        sum += f[to].pos - f[from].pos;
        ++count;
      }
    }
    if (count == 0)
      throw Error(ErrorKind::CalibrationPoseInvalid,
                  std::string(joint_name(from)) + " and " + std::string(joint_name(to)) + " never confident together");
    return sum / static_cast<double>(count);
  };

  const Vec3 body = mean_vector(JointName::PELVIS, JointName::NECK);
  const Vec3 hips = mean_vector(JointName::HIP_L, JointName::HIP_R);
  if (!(body.norm() > 0.0)) throw Error(ErrorKind::CalibrationPoseInvalid, "degenerate body axis");

  ReferenceFrame ref;
  ref.up = body.normalized();
  const Vec3 horizontal{hips.x, 0.0, hips.z};
  const Vec3 lateral = project_onto_plane(horizontal, ref.up);
  if (!(lateral.norm() > 1e-9)) throw Error(ErrorKind::CalibrationPoseInvalid, "degenerate hip axis");
  ref.lateral = lateral.normalized();
  ref.forward = ref.up.cross(ref.lateral);

  const SkeletonFrame mean = mean_frame(uprightFrames);
  ref.origin = mean[JointName::PELVIS].pos;
  ref.referenceAngles = raw_angles(mean, ref);
  return ref;
}

// ---------------------------------------------------------------------------

std::vector<HeadPoseSample> resample_head(std::span<const HeadPoseSample> samples, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::InvalidInput, "rate must be positive");
  detail::check_series(samples, [](const HeadPoseSample& s) { return s.t; });
  const double first = samples.front().t;
  const double last = samples.back().t;
  const std::size_t n = uniform_count(first, last, rate);
  std::vector<HeadPoseSample> out;
  out.reserve(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = std::min(uniform_time(first, rate, i), last);
    while (k + 2 < samples.size() && samples[k + 1].t < ti) ++k;
    const auto& a = samples[k];
    const auto& b = samples[k + 1];
    if (ti == a.t) {
      out.push_back(a);
    } else if (ti == b.t) {
      out.push_back(b);
    } else {
      const double w = (ti - a.t) / (b.t - a.t);
      HeadPoseSample s;
      s.t = ti;
      s.pos = lerp(a.pos, b.pos, w);
      s.orient = {wrap_angle(a.orient.x + wrap_angle(b.orient.x - a.orient.x) * w),
                  wrap_angle(a.orient.y + wrap_angle(b.orient.y - a.orient.y) * w),
                  wrap_angle(a.orient.z + wrap_angle(b.orient.z - a.orient.z) * w)};
      out.push_back(s);
    }
    out.back().t = ti;
  }
  return out;
}

std::optional<HeadPoseSample> head_pose_at(std::span<const HeadPoseSample> samples, double t) {
  if (samples.empty() || t < samples.front().t || t > samples.back().t) return std::nullopt;
  const auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const HeadPoseSample& s, double v) { return s.t < v; });
  if (it->t == t) return *it;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  HeadPoseSample s;
  s.t = t;
  s.pos = lerp(a.pos, b.pos, w);
  s.orient = {wrap_angle(a.orient.x + wrap_angle(b.orient.x - a.orient.x) * w),
              wrap_angle(a.orient.y + wrap_angle(b.orient.y - a.orient.y) * w),
              wrap_angle(a.orient.z + wrap_angle(b.orient.z - a.orient.z) * w)};
  return s;
}

std::vector<std::optional<double>> resample_with_gaps(std::span<const double> times,
                                                      std::span<const std::optional<double>> values,
                                                      double start, double rate, std::size_t n) {
  if (times.size() != values.size()) throw Error(ErrorKind::InvalidInput, "times/values length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error(ErrorKind::UnorderedInput, "timestamps must be strictly increasing");
  std::vector<std::optional<double>> out(n);
  if (times.empty()) return out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = uniform_time(start, rate, i);
    if (ti < times.front() || ti > times.back()) continue;
    while (k + 1 < times.size() && times[k + 1] < ti) ++k;
    if (times[k] == ti) {
      out[i] = values[k];
      continue;
    }
    if (k + 1 >= times.size()) continue;
    if (times[k + 1] == ti) {
      out[i] = values[k + 1];
      continue;
    }
    if (!values[k] || !values[k + 1]) continue;
    out[i] = lerp(*values[k], *values[k + 1], (ti - times[k]) / (times[k + 1] - times[k]));
  }
  return out;
}

double path_length(std::span<const Vec3> positions) {
  if (positions.empty()) throw Error(ErrorKind::EmptySeries, "path_length needs at least one position");
  double total = 0.0;
  for (std::size_t i = 1; i < positions.size(); ++i) total += (positions[i] - positions[i - 1]).norm();
  return total;
}

}  // namespace skitrain
