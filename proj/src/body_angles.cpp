#include "skitrain/body_angles.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>


namespace skitrain {

namespace {

using J = JointName;

constexpr std::array kTrunk = {J::PELVIS, J::NECK};
constexpr std::array kKneeR = {J::HIP_R, J::KNEE_R, J::ANKLE_R};
constexpr std::array kKneeL = {J::HIP_L, J::KNEE_L, J::ANKLE_L};
constexpr std::array kHipR = {J::PELVIS, J::SPINE_CHEST, J::HIP_R, J::KNEE_R};
constexpr std::array kHipL = {J::PELVIS, J::SPINE_CHEST, J::HIP_L, J::KNEE_L};
constexpr std::array kTwist = {J::SHOULDER_L, J::SHOULDER_R, J::HIP_L, J::HIP_R};
constexpr std::array kHeadTilt = {J::PELVIS, J::NECK, J::HEAD};
constexpr std::array kHeadRot = {J::EAR_L, J::EAR_R, J::SHOULDER_L, J::SHOULDER_R};

bool all_usable(const SkeletonFrame& f, std::span<const JointName> joints, Confidence minConf) {
  return std::all_of(joints.begin(), joints.end(), [&](JointName j) { return f.usable(j, minConf); });
}

double clamped_asin(double v) { return std::asin(std::clamp(v, -1.0, 1.0)); }

}  // namespace

std::span<const JointName> required_joints(Angle a) {
  switch (a) {
    case Angle::Sagittal:
    case Angle::Frontal: return kTrunk;
    case Angle::KneeR: return kKneeR;
    case Angle::KneeL: return kKneeL;
    case Angle::HipR: return kHipR;
    case Angle::HipL: return kHipL;
    case Angle::UpperBodyTwist: return kTwist;
    case Angle::HeadTilt: return kHeadTilt;
    case Angle::HeadRotation: return kHeadRot;
  }
  return {};
}

AngleValues raw_angles(const SkeletonFrame& f, const ReferenceFrame& axes, Confidence minConf) {
  AngleValues out{};
  auto ok = [&](Angle a) { return all_usable(f, required_joints(a), minConf); };
  auto p = [&](JointName j) { return f[j].pos; };

  const Vec3 body = p(J::NECK) - p(J::PELVIS);
  const bool trunk = ok(Angle::Sagittal) && body.norm() > 0.0;
  const Vec3 b = trunk ? body.normalized() : Vec3{};
  // Rotations seen from above, positive for a rightward turn.
  const Vec3 down = -axes.up;

  if (trunk) {
    out[static_cast<std::size_t>(Angle::Sagittal)] = clamped_asin(b.dot(axes.lateral));
    out[static_cast<std::size_t>(Angle::Frontal)] = clamped_asin(b.dot(axes.forward));
  }
  if (ok(Angle::KneeR))
    out[static_cast<std::size_t>(Angle::KneeR)] = kPi - angle_between(p(J::KNEE_R) - p(J::HIP_R), p(J::ANKLE_R) - p(J::KNEE_R));
  if (ok(Angle::KneeL))
    out[static_cast<std::size_t>(Angle::KneeL)] = kPi - angle_between(p(J::KNEE_L) - p(J::HIP_L), p(J::ANKLE_L) - p(J::KNEE_L));
  if (ok(Angle::HipR))
    out[static_cast<std::size_t>(Angle::HipR)] = angle_between(p(J::SPINE_CHEST) - p(J::PELVIS), p(J::KNEE_R) - p(J::HIP_R));
  if (ok(Angle::HipL))
    out[static_cast<std::size_t>(Angle::HipL)] = angle_between(p(J::SPINE_CHEST) - p(J::PELVIS), p(J::KNEE_L) - p(J::HIP_L));
  if (ok(Angle::UpperBodyTwist)) {
    const Vec3 hips = project_onto_plane(p(J::HIP_R) - p(J::HIP_L), axes.up);
    const Vec3 shoulders = project_onto_plane(p(J::SHOULDER_R) - p(J::SHOULDER_L), axes.up);
    out[static_cast<std::size_t>(Angle::UpperBodyTwist)] = signed_angle_about(hips, shoulders, down);
  }
  if (ok(Angle::HeadTilt) && trunk)
    out[static_cast<std::size_t>(Angle::HeadTilt)] = angle_between(p(J::HEAD) - p(J::NECK), b);
  if (ok(Angle::HeadRotation)) {
    const Vec3 shoulders = project_onto_plane(p(J::SHOULDER_R) - p(J::SHOULDER_L), axes.up);
    const Vec3 ears = project_onto_plane(p(J::EAR_R) - p(J::EAR_L), axes.up);
    out[static_cast<std::size_t>(Angle::HeadRotation)] = signed_angle_about(shoulders, ears, down);
  }
  return out;
}

AngleSet compute_angles(const SkeletonFrame& frame, const ReferenceFrame& ref, Confidence minConf) {
  const AngleValues raw = raw_angles(frame, ref, minConf);
  AngleSet out;
  for (std::size_t i = 0; i < kAngleCount; ++i) {
    if (!raw[i] || !ref.referenceAngles[i]) continue;
    double delta = *raw[i] - *ref.referenceAngles[i];
    // Signed planar angles can cross the +-pi seam.
    const Angle a = angle_at(i);
    if (a == Angle::UpperBodyTwist || a == Angle::HeadRotation) delta = wrap_angle(delta);
    out.values[i] = delta;
  }
  return out;
}

// ---------------------------------------------------------------------------

CameraAssignment select_cameras(std::span<const std::vector<SkeletonFrame>> streams) {
  if (streams.empty()) throw Error(ErrorKind::InvalidInput, "select_cameras needs at least one camera stream");
  struct Candidate {
    int camera;
    const std::vector<SkeletonFrame>* frames;
  };
  std::vector<Candidate> cams;
  for (const auto& s : streams) {
    if (s.empty()) throw Error(ErrorKind::EmptySeries, "camera stream is empty");
    cams.push_back({s.front().camera, &s});
  }
  std::sort(cams.begin(), cams.end(), [](const Candidate& a, const Candidate& b) { return a.camera < b.camera; });

  CameraAssignment out;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    double best = -1.0;
    int bestCam = cams.front().camera;
    for (const auto& c : cams) {
      const auto confident = std::count_if(c.frames->begin(), c.frames->end(), [j](const SkeletonFrame& f) {
        return f.usable(joint_at(j), Confidence::MEDIUM);
      });
      const double fraction = static_cast<double>(confident) / static_cast<double>(c.frames->size());
      if (fraction > best) {  // strict: ties keep the lower id
        best = fraction;
        bestCam = c.camera;
      }
    }
    out.camera[j] = bestCam;
    out.untrackable[j] = best <= 0.0;
  }
  return out;
}

std::vector<SkeletonFrame> filter_confidence(std::span<const SkeletonFrame> frames, Confidence minConf) {
  std::vector<SkeletonFrame> out(frames.begin(), frames.end());
  for (auto& f : out)
    for (auto& j : f.joints)
      if (j.conf < minConf) j.conf = Confidence::NONE;
  return out;
}

std::vector<SkeletonFrame> fuse_streams(std::span<const std::vector<SkeletonFrame>> streams,
                                        const CameraAssignment& assignment, double tolerance) {
  if (streams.empty()) return {};
  const std::vector<SkeletonFrame>* base = nullptr;
  for (const auto& s : streams)
    if (!s.empty() && (base == nullptr || s.front().camera < base->front().camera)) base = &s;
  if (base == nullptr) return {};

  auto stream_for = [&](int camera) -> const std::vector<SkeletonFrame>* {
    for (const auto& s : streams)
      if (!s.empty() && s.front().camera == camera) return &s;
    return nullptr;
  };
  auto nearest = [&](const std::vector<SkeletonFrame>& s, double t) -> const SkeletonFrame* {
    const auto it = std::lower_bound(s.begin(), s.end(), t, [](const SkeletonFrame& f, double v) { return f.t < v; });
    const SkeletonFrame* best = nullptr;
    double bestDt = tolerance;
    if (it != s.begin() && std::abs((it - 1)->t - t) <= bestDt) {
      best = &*(it - 1);
      bestDt = std::abs(best->t - t);
    }
    if (it != s.end() && std::abs(it->t - t) < bestDt + (best == nullptr ? 1e-12 : 0.0)) best = &*it;
    return best;
  };

  std::vector<SkeletonFrame> out;
  out.reserve(base->size());
  for (const auto& bf : *base) {
    SkeletonFrame fused;
    fused.t = bf.t;
    fused.camera = bf.camera;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      if (assignment.untrackable[j]) continue;
      const int cam = assignment.camera[j];
      if (cam == bf.camera) {
        fused.joints[j] = bf.joints[j];
        continue;
      }
      const auto* s = stream_for(cam);
      if (s == nullptr) continue;
      if (const SkeletonFrame* f = nearest(*s, bf.t)) fused.joints[j] = f->joints[j];
    }
    out.push_back(fused);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::optional<double>> AngleSeries::column(Angle a) const {
  std::vector<std::optional<double>> out;
  out.reserve(angles.size());
  for (const auto& s : angles) out.push_back(s[a]);
  return out;
}

AngleSeries compute_angle_series(std::span<const SkeletonFrame> frames, const ReferenceFrame& ref,
                                 Confidence minConf) {
  AngleSeries out;
  out.times.reserve(frames.size());
  out.angles.reserve(frames.size());
  for (const auto& f : frames) {
    out.times.push_back(f.t);
    out.angles.push_back(compute_angles(f, ref, minConf));
  }
  return out;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::optional<double> parse_cell(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw Error(ErrorKind::ParseError, "bad number in angle CSV: '" + std::string(cell) + "'");
  return v;
}

}  // namespace

std::string angle_series_to_csv(const AngleSeries& series) {
  std::string out = "t";
  for (std::size_t i = 0; i < kAngleCount; ++i) {
    out += ',';
    out += angle_key(angle_at(i));
  }
  out += '\n';
  for (std::size_t r = 0; r < series.size(); ++r) {
    append_double(out, series.times[r]);
    for (std::size_t i = 0; i < kAngleCount; ++i) {
      out += ',';
      if (const auto& v = series.angles[r].values[i]) append_double(out, *v);
    }
    out += '\n';
  }
  return out;
}

AngleSeries angle_series_from_csv(const std::string& text) {
  AngleSeries out;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      if (line.rfind("t,", 0) != 0) throw Error(ErrorKind::ParseError, "angle CSV must start with a 't,...' header");
      continue;
    }
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != kAngleCount + 1)
      throw Error(ErrorKind::ParseError, "angle CSV row needs 10 cells, got " + std::to_string(cells.size()));
    const auto t = parse_cell(cells[0]);
    if (!t) throw Error(ErrorKind::ParseError, "angle CSV row missing time");
    out.times.push_back(*t);
    AngleSet s;
    for (std::size_t i = 0; i < kAngleCount; ++i) s.values[i] = parse_cell(cells[i + 1]);
    out.angles.push_back(s);
  }
  return out;
}

}  // namespace skitrain
