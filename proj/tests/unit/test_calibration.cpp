#include <doctest.h>

#include <cmath>

#include "skitrain/calibration.hpp"
#include "skitrain/geometry.hpp"

using namespace skitrain;

namespace {

// 50 Hz stream with one 2 s window per phase and 0.5 s gaps. The lean in
// each window is shaped by `lean(phase, u)` for u in [0, 1].
template <typename Lean>
std::pair<std::vector<HeadPoseSample>, CalibrationSchedule> session(Vec3 center, Lean lean) {
  std::vector<HeadPoseSample> stream;
  CalibrationSchedule schedule;
  double t = 0.0;
  for (std::size_t p = 0; p < kCalibrationPhases; ++p) {
    const double begin = 2.5 * static_cast<double>(p);
    schedule.windows[p] = {begin, begin + 2.0};
    for (int i = 0; i <= 100; ++i) {
      t = begin + 0.02 * i;
      stream.push_back({t, center + lean(static_cast<CalibrationPhase>(p), i / 100.0), {}});
    }
  }
  return {stream, schedule};
}

Vec3 extremes(CalibrationPhase p, double u) {
  const double bump = std::sin(kPi * u);
  switch (p) {
    case CalibrationPhase::Upright: return {};
    case CalibrationPhase::Left: return {-0.30 * bump, 0, 0};
    case CalibrationPhase::Right: return {0.20 * bump, 0, 0};
    case CalibrationPhase::Front: return {0, -0.02 * bump, -0.16 * bump};
    case CalibrationPhase::Back: return {0, 0, 0.08 * bump};
  }
  return {};
}

CalibrationProfile sample_profile() {
  CalibrationProfile p;
  p.xLeft = 0.3;
  p.xRight = 0.2;
  p.zFront = 0.16;
  p.zBack = 0.08;
  p.yUpright = 1.7;
  p.stanceOffset = 0.03;
  p.xCenter = 0.1;
  p.zCenter = -0.05;
  return p;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("constructed extrema are recovered") {
  const Vec3 center{0.1, 1.7, -0.05};
  const auto [stream, schedule] = session(center, extremes);
  const CalibrationProfile p = run_calibration(stream, schedule);
  CHECK(p.xLeft == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(p.xRight == doctest::Approx(0.20).epsilon(1e-12));
  CHECK(p.zFront == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(p.zBack == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(p.yUpright == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(p.stanceOffset == doctest::Approx(0.25 * 0.5 * (0.16 + 0.08)).epsilon(1e-12));
  CHECK(p.xCenter == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p.zCenter == doctest::Approx(-0.05).epsilon(1e-12));
  CalibrationOptions opt;
  opt.stanceFraction = 0.5;
  CHECK(run_calibration(stream, schedule, opt).stanceOffset == doctest::Approx(0.06).epsilon(1e-12));
}

TEST_CASE("sinusoidal lean of amplitude A") {
  const double A = 0.137;
  auto lean = [A](CalibrationPhase p, double u) -> Vec3 {
    const double s = A * std::sin(2.0 * kPi * u);
    switch (p) {
      case CalibrationPhase::Upright: return {};
      case CalibrationPhase::Left:
      case CalibrationPhase::Right: return {s, 0, 0};
      default: return {0, 0, s};
    }
  };
  const auto [stream, schedule] = session({0, 1.6, 0}, lean);
  const CalibrationProfile p = run_calibration(stream, schedule);
  // Samples at u = k/100 hit sin(2 pi u) = +-1 exactly at k = 25, 75.
  for (double r : {p.xLeft, p.xRight, p.zFront, p.zBack}) CHECK(std::abs(r - A) <= 1e-6);
}

TEST_CASE("calibration errors") {
  const auto [stream, schedule] = session({0, 1.7, 0}, [](CalibrationPhase, double) { return Vec3{}; });
  CHECK(kind_of([&] { run_calibration(stream, schedule); }) == ErrorKind::DegenerateRange);

  const auto [good, sched] = session({0, 1.7, 0}, extremes);
  std::vector<HeadPoseSample> sparse;
  for (const auto& s : good)
    if (!(s.t >= sched.windows[2].begin && s.t <= sched.windows[2].end) || sparse.size() % 20 == 0) sparse.push_back(s);
  CHECK(kind_of([&] { run_calibration(sparse, sched); }) == ErrorKind::InsufficientCalibrationData);

  CalibrationSchedule overlapping = sched;
  overlapping.windows[1].begin = overlapping.windows[0].end - 0.5;
  CHECK(kind_of([&] { run_calibration(good, overlapping); }) == ErrorKind::InvalidInput);
}

TEST_CASE("normalize_input endpoints and clamps") {
  const CalibrationProfile p = sample_profile();
  auto at = [&](double dx, double dz, double y) { return normalize_input({0.0, {p.xCenter + dx, y, p.zCenter + dz}, {}}, p); };
  CHECK(at(-p.xLeft, 0, 1.7).uLat == -1.0);
  CHECK(at(p.xRight, 0, 1.7).uLat == 1.0);
  CHECK(at(2 * p.xRight, 0, 1.7).uLat == 1.0);
  CHECK(at(-5.0, 0, 1.7).uLat == -1.0);
  const ControlInput zero = at(0, 0, p.yUpright);
  CHECK(zero.uLat == 0.0);
  CHECK(zero.uFore == 0.0);
  CHECK(zero.upright);
  CHECK(at(0, -p.zFront, 1.7).uFore == 1.0);
  CHECK(at(0, p.zBack, 1.7).uFore == -1.0);
  CHECK(at(0, -p.zFront / 2, 1.7).uFore == doctest::Approx(0.5));
  CHECK(at(p.xRight / 4, 0, 1.7).uLat == doctest::Approx(0.25));
  CHECK(!at(0, 0, p.yUpright - p.stanceOffset).upright);
  CHECK(at(0, 0, p.yUpright - p.stanceOffset + 1e-9).upright);
}

TEST_CASE("normalize_input is monotone, scale invariant and invertible") {
  const CalibrationProfile p = sample_profile();
  CalibrationProfile doubled = p;
  doubled.xLeft *= 2;
  doubled.xRight *= 2;
  doubled.zFront *= 2;
  doubled.zBack *= 2;
  double prevLat = -2.0, prevFore = -2.0;
  for (int i = -400; i <= 400; ++i) {
    const double d = i * 0.001;
    const ControlInput a = normalize_input({0, {p.xCenter + d, 1.7, p.zCenter - d}, {}}, p);
    CHECK(a.uLat >= prevLat);
    CHECK(a.uFore >= prevFore);
    prevLat = a.uLat;
    prevFore = a.uFore;
    const ControlInput b = normalize_input({0, {doubled.xCenter + 2 * d, 1.7, doubled.zCenter - 2 * d}, {}}, doubled);
    CHECK(std::abs(a.uLat - b.uLat) <= 1e-12);
    CHECK(std::abs(a.uFore - b.uFore) <= 1e-12);
    if (d >= -p.xLeft && d <= p.xRight) CHECK(std::abs(denormalize_lateral(a.uLat, p) - d) <= 1e-12);
    if (d >= -p.zBack && d <= p.zFront) CHECK(std::abs(denormalize_fore(a.uFore, p) - d) <= 1e-12);
  }
}

TEST_CASE("profile validation") {
  CHECK_NOTHROW(sample_profile().validate());
  CalibrationProfile bad = sample_profile();
  bad.zBack = 0.0;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::InvalidInput);
  bad = sample_profile();
  bad.xCenter = NAN;
  CHECK_THROWS_AS(bad.validate(), Error);
}
