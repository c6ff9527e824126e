#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "skitrain/error.hpp"
#include "skitrain/geometry.hpp"

// World frame shared by every module: x lateral-right, y up, z backward.
// Forward (downhill, facing direction) is therefore -z.

namespace skitrain {

inline constexpr Vec3 kWorldUp{0.0, 1.0, 0.0};

struct HeadPoseSample {
  double t = 0.0;
  Vec3 pos;
  /// Intrinsic X->Y->Z Euler angles, radians.
  Vec3 orient;

  friend bool operator==(const HeadPoseSample&, const HeadPoseSample&) = default;
};

// ---------------------------------------------------------------------------
// Skeleton

enum class JointName : int {
  PELVIS,
  SPINE_NAVEL,
  SPINE_CHEST,
  NECK,
  CLAVICLE_L,
  SHOULDER_L,
  ELBOW_L,
  WRIST_L,
  HAND_L,
  HANDTIP_L,
  THUMB_L,
  CLAVICLE_R,
  SHOULDER_R,
  ELBOW_R,
  WRIST_R,
  HAND_R,
  HANDTIP_R,
  THUMB_R,
  HIP_L,
  KNEE_L,
  ANKLE_L,
  FOOT_L,
  HIP_R,
  KNEE_R,
  ANKLE_R,
  FOOT_R,
  HEAD,
  NOSE,
  EYE_L,
  EAR_L,
  EYE_R,
  EAR_R,
};

inline constexpr std::size_t kJointCount = 32;

std::string_view joint_name(JointName j);
std::optional<JointName> parse_joint_name(std::string_view s);
/// Left/right counterpart; midline joints map to themselves.
JointName mirror_joint(JointName j);

inline constexpr std::size_t index_of(JointName j) { return static_cast<std::size_t>(j); }
inline constexpr JointName joint_at(std::size_t i) { return static_cast<JointName>(static_cast<int>(i)); }

enum class Confidence : int { NONE = 0, LOW = 1, MEDIUM = 2, HIGH = 3 };

std::string_view confidence_name(Confidence c);
std::optional<Confidence> parse_confidence(std::string_view s);

struct JointSample {
  Vec3 pos;
  Confidence conf = Confidence::NONE;

  friend bool operator==(const JointSample&, const JointSample&) = default;
};

struct SkeletonFrame {
  double t = 0.0;
  int camera = 1;
  std::array<JointSample, kJointCount> joints{};

  const JointSample& operator[](JointName j) const { return joints[index_of(j)]; }
  JointSample& operator[](JointName j) { return joints[index_of(j)]; }

  bool usable(JointName j, Confidence minConf) const {
    const auto c = (*this)[j].conf;
    return c != Confidence::NONE && c >= minConf;
  }

  friend bool operator==(const SkeletonFrame&, const SkeletonFrame&) = default;
};

// ---------------------------------------------------------------------------
// Body-model angles (values computed in body_angles.cpp)

enum class Angle : int {
  Sagittal,
  Frontal,
  KneeR,
  KneeL,
  HipR,
  HipL,
  UpperBodyTwist,
  HeadTilt,
  HeadRotation,
};

inline constexpr std::size_t kAngleCount = 9;

std::string_view angle_key(Angle a);    // CSV column key, e.g. "kneeR"
std::string_view angle_label(Angle a);  // report label, e.g. "Right Knee"

inline constexpr Angle angle_at(std::size_t i) { return static_cast<Angle>(static_cast<int>(i)); }

/// Nine optional angle values; absent means a required joint was missing.
using AngleValues = std::array<std::optional<double>, kAngleCount>;

// ---------------------------------------------------------------------------
// Upright reference

struct ReferenceFrame {
  Vec3 origin;
  Vec3 up{0, 1, 0};
  Vec3 forward{0, 0, -1};
  Vec3 lateral{1, 0, 0};
  /// Raw (non-delta) angle values on the mean upright frame.
  AngleValues referenceAngles{};

  ReferenceFrame transformed(const RigidTransform& tf) const;
};

/// Per-joint mean over frames where the joint is at least `minConf`.
/// Joints never seen confidently stay NONE; others become HIGH.
SkeletonFrame mean_frame(std::span<const SkeletonFrame> frames, Confidence minConf = Confidence::MEDIUM);

/// Estimates body axes at upright stance. Requires >= 10 frames with
/// PELVIS, NECK, HIP_L and HIP_R confident in a majority of them.
ReferenceFrame estimate_reference_frame(std::span<const SkeletonFrame> uprightFrames);

// ---------------------------------------------------------------------------
// Time series

template <typename T>
struct TimedSample {
  double t = 0.0;
  T value{};
};

template <typename T>
struct UniformSeries {
  double rate = 25.0;
  double start = 0.0;
  std::vector<T> values;

  double time_at(std::size_t i) const;
  std::size_t size() const { return values.size(); }
};

/// Time of the i-th node of a uniform grid. Every producer and consumer
/// of uniform grids uses this so node times agree bit for bit.
inline double uniform_time(double start, double rate, std::size_t i) {
  return start + static_cast<double>(i) / rate;
}

/// Number of grid nodes covering [first, last] at `rate`.
inline std::size_t uniform_count(double first, double last, double rate) {
  return static_cast<std::size_t>(std::floor((last - first) * rate + 1e-9)) + 1;
}

template <typename T>
double UniformSeries<T>::time_at(std::size_t i) const {
  return uniform_time(start, rate, i);
}

inline double lerp(double a, double b, double w) { return a + (b - a) * w; }
inline Vec3 lerp(const Vec3& a, const Vec3& b, double w) { return a + (b - a) * w; }

namespace detail {
template <typename T, typename TimeOf>
void check_series(std::span<const T> samples, TimeOf timeOf) {
  if (samples.size() < 2) throw Error(ErrorKind::EmptySeries, "need at least 2 samples to resample");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(timeOf(samples[i]))) throw Error(ErrorKind::InvalidInput, "non-finite timestamp");
    if (i > 0 && !(timeOf(samples[i]) > timeOf(samples[i - 1])))
      throw Error(ErrorKind::UnorderedInput, "timestamps must be strictly increasing");
  }
}
}  // namespace detail

/// Linearly interpolates strictly increasing samples onto a uniform grid
/// spanning [first t, last t]. Samples that fall on a grid node are copied
/// exactly.
template <typename T>
UniformSeries<T> resample_uniform(std::span<const TimedSample<T>> samples, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::InvalidInput, "rate must be positive");
  detail::check_series(samples, [](const TimedSample<T>& s) { return s.t; });
  const double first = samples.front().t;
  const double last = samples.back().t;
  UniformSeries<T> out;
  out.rate = rate;
  out.start = first;
  const std::size_t n = uniform_count(first, last, rate);
  out.values.reserve(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = std::min(uniform_time(first, rate, i), last);
    while (k + 2 < samples.size() && samples[k + 1].t < ti) ++k;
    const auto& a = samples[k];
    const auto& b = samples[k + 1];
    if (ti == a.t) {
      out.values.push_back(a.value);
    } else if (ti == b.t) {
      out.values.push_back(b.value);
    } else {
      out.values.push_back(lerp(a.value, b.value, (ti - a.t) / (b.t - a.t)));
    }
  }
  return out;
}

template <typename T>
UniformSeries<T> resample_uniform(const std::vector<TimedSample<T>>& samples, double rate) {
  return resample_uniform(std::span<const TimedSample<T>>(samples), rate);
}

/// Resamples a head-pose stream onto a uniform grid. Orientation is
/// interpolated along the shorter way around each Euler angle.
std::vector<HeadPoseSample> resample_head(std::span<const HeadPoseSample> samples, double rate);

/// Evaluates a head-pose stream at `t` by linear interpolation; nullopt
/// outside the covered time range.
std::optional<HeadPoseSample> head_pose_at(std::span<const HeadPoseSample> samples, double t);

/// Gap-aware resampling of a scalar series: a grid node is absent if
/// either bracketing sample is absent. Grid spans [start, start + (n-1)/rate].
std::vector<std::optional<double>> resample_with_gaps(std::span<const double> times,
                                                      std::span<const std::optional<double>> values,
                                                      double start, double rate, std::size_t n);

/// Sum of Euclidean distances between consecutive positions.
double path_length(std::span<const Vec3> positions);

}  // namespace skitrain
