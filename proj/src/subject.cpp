#include "skitrain/subject.hpp"

#include <algorithm>
#include <cmath>

#include "skitrain/rng.hpp"

namespace skitrain {

SubjectParams random_subject(std::uint64_t seed, int index) {
  SplitMix64 rng(seed, "subject", static_cast<std::uint64_t>(index));
  SubjectParams s;
  const double scale = rng.uniform(0.92, 1.08);
  s.trunk = 0.55 * scale;
  s.neck = 0.2 * scale;
  s.thigh = 0.46 * scale;
  s.shank = 0.45 * scale;
  s.hipHalfWidth = rng.uniform(0.085, 0.115);
  s.ankleHalfWidth = s.hipHalfWidth + rng.uniform(0.02, 0.06);
  s.shoulderHalfWidth = rng.uniform(0.17, 0.21) * scale;
  s.headHeight = 1.7 * scale;
  s.pelvisRoll = rng.uniform(0.2, 0.4);
  s.twistGain = rng.uniform(0.3, 0.6);
  s.headTurnGain = rng.uniform(0.2, 0.5);
  s.headFollow = rng.uniform(0.4, 0.7);
  s.leanLeft = rng.uniform(0.2, 0.35);
  s.leanRight = rng.uniform(0.2, 0.35);
  s.leanFront = rng.uniform(0.14, 0.25);
  s.leanBack = rng.uniform(0.1, 0.18);
  return s;
}

namespace {

const Vec3 kX{1, 0, 0};
const Vec3 kY{0, 1, 0};

struct ChainFrames {
  Mat3 body;       // trunk
  Mat3 shoulders;  // trunk plus twist about the body axis
  Mat3 pelvis;
  Mat3 head;
};

ChainFrames chain_frames(const SubjectParams& s, double lean, double forward) {
  ChainFrames f;
  f.body = rotation_x(-forward) * rotation_z(-lean);
  const double twist = s.twistGain * lean;
  f.shoulders = f.body * rotation_y(-twist);
  f.pelvis = rotation_z(-s.pelvisRoll * lean);
  const double yaw = twist + s.headTurnGain * lean;
  f.head = matrix_from_euler_xyz({-s.headFollow * forward, -yaw, -s.headFollow * lean});
  return f;
}

Vec3 head_relative(const SubjectParams& s, double lean, double forward) {
  const ChainFrames f = chain_frames(s, lean, forward);
  return f.body * kY * s.trunk + f.head * kY * s.neck;
}

constexpr double kMaxLean = 1.2;  // rad

}  // namespace

BodyPose solve_pose(const SubjectParams& s, const Vec3& headOffset) {
  const double reach = s.trunk + s.neck;
  double lean = std::asin(std::clamp(headOffset.x / reach, -0.95, 0.95));
  double forward = std::asin(std::clamp(-headOffset.z / reach, -0.95, 0.95));
  // Newton iterations on the horizontal head position.
  constexpr double h = 1e-7;
  for (int it = 0; it < 30; ++it) {
    const Vec3 p = head_relative(s, lean, forward);
    const double fx = p.x - headOffset.x, fz = p.z - headOffset.z;
    if (std::abs(fx) < 1e-13 && std::abs(fz) < 1e-13) break;
    const Vec3 pl = head_relative(s, lean + h, forward), pf = head_relative(s, lean, forward + h);
    const double a = (pl.x - p.x) / h, b = (pf.x - p.x) / h;
    const double c = (pl.z - p.z) / h, d = (pf.z - p.z) / h;
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-12) break;
    lean = std::clamp(lean - (d * fx - b * fz) / det, -kMaxLean, kMaxLean);
    forward = std::clamp(forward - (a * fz - c * fx) / det, -kMaxLean, kMaxLean);
  }
  BodyPose pose;
  pose.lean = lean;
  pose.forward = forward;
  pose.pelvisDrop = head_relative(s, lean, forward).y - reach - headOffset.y;
  const double yaw = (s.twistGain + s.headTurnGain) * lean;
  pose.headOrient = {-s.headFollow * forward, -yaw, -s.headFollow * lean};
  return pose;
}

std::array<Vec3, kJointCount> joint_positions(const SubjectParams& s, const BodyPose& pose) {
  const ChainFrames f = chain_frames(s, pose.lean, pose.forward);
  const double legLength = s.thigh + s.shank;
  const double pelvisUpY = s.headHeight - s.trunk - s.neck;
  const double spread = s.ankleHalfWidth - s.hipHalfWidth;
  const double ankleY = pelvisUpY - std::sqrt(std::pow(0.985 * legLength, 2) - spread * spread);

  std::array<Vec3, kJointCount> j{};
  auto set = [&](JointName n, const Vec3& p) { j[index_of(n)] = p; };
  const Vec3 pelvis{0.0, pelvisUpY - pose.pelvisDrop, 0.0};
  const Vec3 axis = f.body * kY;
  const Vec3 shoulderAxis = f.shoulders * kX;
  const Vec3 neck = pelvis + axis * s.trunk;
  set(JointName::PELVIS, pelvis);
  set(JointName::SPINE_NAVEL, pelvis + axis * (0.33 * s.trunk));
  set(JointName::SPINE_CHEST, pelvis + axis * (0.66 * s.trunk));
  set(JointName::NECK, neck);

  // Arms held forward in a skiing stance.
  const Vec3 upperArm = f.shoulders * Vec3{0.0, -0.7, -0.7}.normalized();
  const Vec3 foreArm = f.shoulders * Vec3{0.0, -0.2, -1.0}.normalized();
  for (const double side : {-1.0, 1.0}) {
    const bool left = side < 0.0;
    const Vec3 clavicle = neck - axis * 0.03 + shoulderAxis * (side * 0.07);
    const Vec3 shoulder = neck - axis * 0.05 + shoulderAxis * (side * s.shoulderHalfWidth);
    const Vec3 elbow = shoulder + upperArm * 0.28;
    const Vec3 wrist = elbow + foreArm * 0.25;
    const Vec3 hand = wrist + foreArm * 0.08;
    set(left ? JointName::CLAVICLE_L : JointName::CLAVICLE_R, clavicle);
    set(left ? JointName::SHOULDER_L : JointName::SHOULDER_R, shoulder);
    set(left ? JointName::ELBOW_L : JointName::ELBOW_R, elbow);
    set(left ? JointName::WRIST_L : JointName::WRIST_R, wrist);
    set(left ? JointName::HAND_L : JointName::HAND_R, hand);
    set(left ? JointName::HANDTIP_L : JointName::HANDTIP_R, hand + foreArm * 0.07);
    set(left ? JointName::THUMB_L : JointName::THUMB_R, hand + shoulderAxis * (-side * 0.04));

    const Vec3 hip = pelvis + f.pelvis * kX * (side * s.hipHalfWidth);
    const Vec3 ankle{side * s.ankleHalfWidth, ankleY, 0.0};
    // Two-bone solve with the knee bending forward.
    const Vec3 toAnkle = ankle - hip;
    const double dist = std::min(toAnkle.norm(), 0.999 * legLength);
    const Vec3 u = toAnkle.normalized();
    const Vec3 pole = project_onto_plane({0.0, 0.0, -1.0}, u).normalized();
    const double cosHip = std::clamp((s.thigh * s.thigh + dist * dist - s.shank * s.shank) / (2.0 * s.thigh * dist), -1.0, 1.0);
    const double hipAngle = std::acos(cosHip);
    const Vec3 knee = hip + (u * std::cos(hipAngle) + pole * std::sin(hipAngle)) * s.thigh;
    set(left ? JointName::HIP_L : JointName::HIP_R, hip);
    set(left ? JointName::KNEE_L : JointName::KNEE_R, knee);
    set(left ? JointName::ANKLE_L : JointName::ANKLE_R, ankle);
    set(left ? JointName::FOOT_L : JointName::FOOT_R, ankle + Vec3{side * 0.02, -0.06, -0.13});
  }

  const Vec3 head = neck + f.head * kY * s.neck;
  set(JointName::HEAD, head);
  set(JointName::NOSE, head + f.head * Vec3{0.0, -0.02, -0.11});
  set(JointName::EYE_L, head + f.head * Vec3{-0.035, 0.03, -0.09});
  set(JointName::EYE_R, head + f.head * Vec3{0.035, 0.03, -0.09});
  set(JointName::EAR_L, head + f.head * Vec3{-0.075, 0.0, 0.0});
  set(JointName::EAR_R, head + f.head * Vec3{0.075, 0.0, 0.0});
  return j;
}

CalibrationSession synthesize_calibration(const SubjectParams& s, std::uint64_t seed, double rate) {
  SplitMix64 rng(seed, "calibration");
  CalibrationSession session;
  session.schedule[CalibrationPhase::Upright] = {0.0, 2.0};
  const std::array<std::pair<CalibrationPhase, Vec3>, 4> leans = {{{CalibrationPhase::Left, {-s.leanLeft, 0, 0}},
                                                                   {CalibrationPhase::Right, {s.leanRight, 0, 0}},
                                                                   {CalibrationPhase::Front, {0, 0, -s.leanFront}},
                                                                   {CalibrationPhase::Back, {0, 0, s.leanBack}}}};
  for (std::size_t k = 0; k < leans.size(); ++k) {
    const double begin = 2.5 + 3.0 * static_cast<double>(k);
    session.schedule[leans[k].first] = {begin, begin + 2.5};
  }
  const Vec3 upright{0.0, s.headHeight, 0.0};
  const std::size_t n = uniform_count(0.0, 14.5, rate);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = uniform_time(0.0, rate, i);
    Vec3 offset;
    for (const auto& [phase, peak] : leans) {
      const TimeWindow w = session.schedule[phase];
      if (t >= w.begin && t <= w.end) {
        const double shape = std::sin(kPi * (t - w.begin) / (w.end - w.begin));
        offset = peak * (shape * shape);
      }
    }
    // Leaning lowers the head along the chain.
    const BodyPose pose = solve_pose(s, offset);
    offset.y = -pose.pelvisDrop;
    const Vec3 noise{rng.normal() * s.headNoise, rng.normal() * s.headNoise, rng.normal() * s.headNoise};
    HeadPoseSample sample;
    sample.t = t;
    sample.pos = upright + offset + noise;
    sample.orient = pose.headOrient;
    session.head.push_back(sample);
  }
  return session;
}

namespace {

enum class Side { Left, Right, Center };

Side joint_side(JointName j) {
  const auto name = joint_name(j);
  if (name.size() > 2 && name.substr(name.size() - 2) == "_L") return Side::Left;
  if (name.size() > 2 && name.substr(name.size() - 2) == "_R") return Side::Right;
  return Side::Center;
}

/// Confidence draw: each camera sees its own side well and the far side poorly.
Confidence draw_confidence(SplitMix64& rng, int camera, Side side) {
  const bool farSide = (camera == 1 && side == Side::Right) || (camera == 2 && side == Side::Left);
  const double u = rng.uniform();
  if (farSide) {
    if (u < 0.3) return Confidence::HIGH;
    if (u < 0.7) return Confidence::MEDIUM;
    if (u < 0.95) return Confidence::LOW;
    return Confidence::NONE;
  }
  if (u < 0.9) return Confidence::HIGH;
  if (u < 0.98) return Confidence::MEDIUM;
  return Confidence::LOW;
}

double noise_scale(Confidence c) {
  switch (c) {
    case Confidence::HIGH: return 1.0;
    case Confidence::MEDIUM: return 2.0;
    case Confidence::LOW: return 5.0;
    case Confidence::NONE: return 10.0;
  }
  return 1.0;
}

}  // namespace

SubjectRecording record_subject(const SubjectParams& s, std::span<const HeadPoseSample> headTrace, std::uint64_t seed,
                                const RecordingOptions& options) {
  if (headTrace.empty()) throw Error(ErrorKind::EmptySeries, "head trace is empty");
  SplitMix64 rng(seed, "recording");
  SubjectRecording rec;
  const Vec3 upright{0.0, s.headHeight, 0.0};

  rec.head.reserve(headTrace.size());
  for (const auto& sample : headTrace) {
    const BodyPose pose = solve_pose(s, sample.pos - upright);
    HeadPoseSample out = sample;
    out.orient = {wrap_angle(pose.headOrient.x + rng.normal() * s.orientNoise),
                  wrap_angle(pose.headOrient.y + rng.normal() * s.orientNoise),
                  wrap_angle(pose.headOrient.z + rng.normal() * s.orientNoise)};
    rec.head.push_back(out);
  }

  const double start = -options.uprightDuration;
  const double end = headTrace.back().t;
  const std::size_t n = uniform_count(start, end, options.skeletonRate);
  for (int camera = 1; camera <= 2; ++camera) {
    SplitMix64 camRng(seed, "camera", static_cast<std::uint64_t>(camera));
    const double offset = camera == 2 ? options.camera2Offset : 0.0;
    auto& stream = rec.cameras[static_cast<std::size_t>(camera - 1)];
    stream.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = uniform_time(start, options.skeletonRate, i) + offset;
      Vec3 headOffset;
      if (t >= headTrace.front().t) {
        const auto pose = head_pose_at(headTrace, t);
        if (!pose) continue;
        headOffset = pose->pos - upright;
      }
      const auto joints = joint_positions(s, solve_pose(s, headOffset));
      SkeletonFrame frame;
      frame.t = t;
      frame.camera = camera;
      for (std::size_t k = 0; k < kJointCount; ++k) {
        Confidence conf = draw_confidence(camRng, camera, joint_side(joint_at(k)));
        if (conf != Confidence::NONE && camRng.uniform() < options.dropoutRate) conf = Confidence::LOW;
        const double sigma = s.jointNoise * noise_scale(conf);
        frame.joints[k].pos = joints[k] + Vec3{camRng.normal() * sigma, camRng.normal() * sigma, camRng.normal() * sigma};
        frame.joints[k].conf = conf;
      }
      stream.push_back(frame);
    }
  }
  return rec;
}

}  // namespace skitrain
