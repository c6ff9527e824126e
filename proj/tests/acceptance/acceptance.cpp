// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "angle_oracle.hpp"
#include "beast_client.hpp"
#include "fixtures.hpp"
#include "skitrain/body_angles.hpp"
#include "skitrain/io.hpp"
#include "skitrain/pipeline.hpp"
#include "skitrain/server.hpp"
#include "skitrain/stats.hpp"
#include "support.hpp"

using namespace skitrain;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / "skitrain-acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

CalibrationProfile skier_profile() {
  CalibrationProfile p;
  p.xLeft = 0.25;
  p.xRight = 0.22;
  p.zFront = 0.15;
  p.zBack = 0.10;
  p.yUpright = 1.65;
  p.stanceOffset = 0.25 * 0.5 * (0.15 + 0.10);
  return p;
}

std::vector<PlayerState> drive(const Level& lv, std::span<const ControlInput> inputs, double speed0 = 0.0) {
  PropSet props = lv.props;
  PlayerState s = initial_state(lv);
  s.speed = speed0;
  std::vector<SimEvent> events;
  std::vector<PlayerState> out;
  for (const auto& in : inputs) {
    s = step(s, in, lv, props, SimParams{}, events);
    out.push_back(s);
  }
  return out;
}

std::vector<ControlInput> random_inputs(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ControlInput> out;
  double lat = 0.0, fore = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 25 == 0) {
      lat = u(rng);
      fore = u(rng);
    }
    out.push_back({lat, fore, false});
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  std::vector<double> seconds;
  for (const char* name : {"a", "b"}) {
    const fs::path dir = scratch_root() / ("pipeline-" + std::string(name));
    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd = "'" SKITRAIN_CLI_PATH "' pipeline --synthetic 10 --seed 1 --out '" + dir.string() + "' > /dev/null";
    const int status = std::system(cmd.c_str());
    seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, std::string("pipeline run ") + name + " failed");
  }
  if (!o.pass) return o;
  std::map<std::string, std::string> a, b;
  auto collect = [](const fs::path& dir, std::map<std::string, std::string>& files) {
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  };
  collect(scratch_root() / "pipeline-a", a);
  collect(scratch_root() / "pipeline-b", b);
  std::size_t runLogs = 0;
  for (const auto& [name, _] : a) runLogs += name.ends_with("run.jsonl");
  o.require(a.size() == b.size(), "file sets differ");
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    o.require(it != b.end() && it->second == content, name + " differs");
  }
  o.require(a.contains("report.md"), "report.md missing");
  o.require(runLogs == 60, "expected 60 RunLogs, found " + std::to_string(runLogs));
  for (double s : seconds) o.require(s < 60.0, "runtime " + fmt("%.1f", s) + " s exceeds 60 s");
  if (o.pass)
    o.detail = std::to_string(a.size()) + " files identical incl. " + std::to_string(runLogs) + " RunLogs; runtimes " +
               fmt("%.1f", seconds[0]) + " s, " + fmt("%.1f", seconds[1]) + " s";
  return o;
}

Outcome terrain_properties() {
  Outcome o;
  double worstTangent = 0.0, worstJoin = 0.0;
  std::size_t nonDescending = 0;
  std::array<double, 3> minR{1e300, 1e300, 1e300}, maxR{0, 0, 0};
  for (int level = 1; level <= 3; ++level)
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      LevelParams p = difficulty_preset(level, seed);
      p.noiseAmplitude = 0.0;
      const Level lv = generate_level(p);
      const Track& t = lv.track;
      for (const auto& a : t.arcs) {
        minR[level - 1] = std::min(minR[level - 1], a.radius);
        maxR[level - 1] = std::max(maxR[level - 1], a.radius);
      }
      for (std::size_t k = 0; k + 1 < t.arcs.size(); ++k) {
        const Arc& a = t.arcs[k];
        const Arc& b = t.arcs[k + 1];
        worstJoin = std::max(worstJoin, (a.point_at(a.length()) - b.point_at(0.0)).norm());
        worstTangent = std::max(worstTangent, std::abs(wrap_angle(a.heading_at(a.length()) - b.heading_at(0.0))));
      }
      double prev = 1e300;
      for (double s = 0.0; s <= t.length(); s += 0.25) {
        const Vec2 q = t.point_at(s);
        const double h = sample_height(lv.heightmap, q.x, q.z);
        nonDescending += h < prev ? 0 : 1;
        prev = h;
      }
    }
  o.require(nonDescending == 0, std::to_string(nonDescending) + " non-descending centerline samples");
  o.require(worstTangent <= 1e-6, "tangent discontinuity " + fmt("%.3g", worstTangent));
  o.require(worstJoin <= 1e-6, "position discontinuity " + fmt("%.3g", worstJoin));
  o.require(minR[0] > maxR[1] && minR[1] > maxR[2], "generated radii overlap across levels");
  const LevelParams l1 = difficulty_preset(1), l2 = difficulty_preset(2), l3 = difficulty_preset(3);
  o.require(l1.radiusMin > l2.radiusMin && l2.radiusMin > l3.radiusMin, "preset min radius not decreasing");
  o.require(l1.baseSlope < l2.baseSlope && l2.baseSlope < l3.baseSlope, "slope not increasing");
  o.require(l1.noiseAmplitude < l2.noiseAmplitude && l2.noiseAmplitude < l3.noiseAmplitude, "noise not increasing");
  if (o.pass)
    o.detail = "300 tracks; max tangent gap " + fmt("%.2g", worstTangent) + " rad; generated radii L1 [" + fmt("%.1f", minR[0]) +
               ", " + fmt("%.1f", maxR[0]) + "] > L2 [" + fmt("%.1f", minR[1]) + ", " + fmt("%.1f", maxR[1]) + "] > L3 [" +
               fmt("%.1f", minR[2]) + ", " + fmt("%.1f", maxR[2]) + "]";
  return o;
}

Outcome physics_symmetry() {
  Outcome o;
  double worstHeading = 0.0;
  for (double slope : {8.0, 11.0, 14.0}) {
    const Level lv = testsupport::straight_level(slope, 120.0);
    std::vector<ControlInput> inputs(600, ControlInput{0.0, 0.5, false});
    for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i].uFore = std::sin(0.01 * static_cast<double>(i));
    const auto states = drive(lv, inputs);
    worstHeading = std::max(worstHeading, std::abs(states.back().heading));
  }
  o.require(worstHeading <= 1e-9, "final heading " + fmt("%.3g", worstHeading));

  double worstMirror = 0.0;
  std::size_t steps = 0;
  for (int level = 1; level <= 3; ++level)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Level lv = generate_level(difficulty_preset(level, seed));
      const Level mv = mirror_level(lv);
      const RunLog log = run_headless(lv, skier_profile(), synthesize_skier_trace(lv, skier_profile()));
      std::vector<ControlInput> negated = log.inputs;
      for (auto& in : negated) in.uLat = -in.uLat;
      const auto a = drive(lv, log.inputs);
      const auto b = drive(mv, negated);
      const double axis = lv.track.start.x;
      for (std::size_t i = 0; i < a.size(); ++i) {
        worstMirror = std::max({worstMirror, std::abs(b[i].posXZ.x - (2 * axis - a[i].posXZ.x)), std::abs(b[i].posXZ.z - a[i].posXZ.z),
                                std::abs(b[i].heading + a[i].heading), std::abs(b[i].speed - a[i].speed),
                                std::abs(b[i].yawRate + a[i].yawRate)});
        o.require(a[i].score == b[i].score || !o.pass, "mirrored score differs");
      }
      steps += a.size();
    }
  o.require(worstMirror <= 1e-9, "mirror deviation " + fmt("%.3g", worstMirror));
  if (o.pass)
    o.detail = "max |final heading| " + fmt("%.2g", worstHeading) + "; mirrored max deviation " + fmt("%.2g", worstMirror) + " over " +
               std::to_string(steps) + " steps, 30 tracks";
  return o;
}

Outcome upright_damping() {
  Outcome o;
  std::size_t pairs = 0, violations = 0, yawViolations = 0, strictPairs = 0;
  auto compare = [&](const Level& lv, std::vector<ControlInput> crouched, double speed0) {
    for (auto& in : crouched) in.upright = false;
    auto upright = crouched;
    for (auto& in : upright) in.upright = true;
    const auto a = drive(lv, crouched, speed0);
    const auto b = drive(lv, upright, speed0);
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      violations += b[i].speed <= a[i].speed ? 0 : 1;
      yawViolations += std::abs(b[i].yawRate) <= std::abs(a[i].yawRate) ? 0 : 1;
      strict = strict || b[i].speed < a[i].speed;
    }
    ++pairs;
    strictPairs += strict ? 1 : 0;
  };
  // Flat terrain: gravity does not depend on heading, so steering and fore
  // input can both vary.
  const Level flat = testsupport::straight_level(0.0, 150.0, 25.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) compare(flat, random_inputs(seed, 400), 6.0);
  // Sloped planes with fore/aft input and no steering.
  for (double slope : {8.0, 11.0, 14.0}) {
    const Level lv = testsupport::straight_level(slope, 150.0, 25.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto inputs = random_inputs(100 + seed, 400);
      for (auto& in : inputs) in.uLat = 0.0;
      compare(lv, inputs, 0.0);
    }
  }
  // Yaw rate dominance on the preset tracks with ideal-skier input.
  std::size_t presetYawViolations = 0;
  for (int level = 1; level <= 3; ++level)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Level lv = generate_level(difficulty_preset(level, seed));
      const RunLog log = run_headless(lv, skier_profile(), synthesize_skier_trace(lv, skier_profile()));
      auto upright = log.inputs;
      for (auto& in : upright) in.upright = true;
      const auto b = drive(lv, upright);
      for (std::size_t i = 0; i < b.size(); ++i) presetYawViolations += std::abs(b[i].yawRate) <= std::abs(log.states[i].yawRate) ? 0 : 1;
    }
  o.require(violations == 0, std::to_string(violations) + " speed dominance violations");
  o.require(yawViolations == 0 && presetYawViolations == 0, std::to_string(yawViolations + presetYawViolations) + " yaw-rate violations");
  o.require(strictPairs == pairs, "some pairs never strictly slower");
  if (o.pass)
    o.detail = std::to_string(pairs) + " input pairs with speed and |yawRate| dominance at every step; yaw dominance on 30 preset runs";
  return o;
}

Outcome angle_oracle() {
  Outcome o;
  const ReferenceFrame ref = testsupport::upright_reference();
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto c = testsupport::random_angle_case(rng);
    const AngleSet got = compute_angles(c.frame, ref);
    for (std::size_t a = 0; a < kAngleCount; ++a) {
      if (!got.values[a]) {
        o.require(false, "angle absent in case " + std::to_string(i));
        continue;
      }
      worst = std::max(worst, std::abs(*got.values[a] - *c.expected[a]));
    }
  }
  o.require(worst <= 1e-6, "oracle deviation " + fmt("%.3g", worst));

  std::uniform_real_distribution<double> u(-kPi, kPi);
  double worstRigid = 0.0, worstMirror = 0.0;
  for (int i = 0; i < 300; ++i) {
    const auto c = testsupport::random_angle_case(rng);
    RigidTransform tf;
    tf.rotation = matrix_from_euler_xyz({u(rng), u(rng) / 2, u(rng)});
    tf.translation = {u(rng), u(rng), u(rng)};
    SkeletonFrame moved = c.frame;
    for (auto& j : moved.joints) j.pos = tf.apply(j.pos);
    const AngleSet a = compute_angles(c.frame, ref);
    const AngleSet b = compute_angles(moved, ref.transformed(tf));
    for (std::size_t k = 0; k < kAngleCount; ++k) worstRigid = std::max(worstRigid, std::abs(*a.values[k] - *b.values[k]));
    const AngleSet m = compute_angles(testsupport::mirrored(c.frame), ref);
    worstMirror = std::max({worstMirror, std::abs(*m.sagittalPlane() + *a.sagittalPlane()), std::abs(*m.frontalPlane() - *a.frontalPlane()),
                            std::abs(*m.upperBodyTwist() + *a.upperBodyTwist()), std::abs(*m.headRotation() + *a.headRotation()),
                            std::abs(*m.kneeL() - *a.kneeR()), std::abs(*m.kneeR() - *a.kneeL()), std::abs(*m.hipL() - *a.hipR()),
                            std::abs(*m.hipR() - *a.hipL()), std::abs(*m.headTilt() - *a.headTilt())});
  }
  o.require(worstRigid <= 1e-9, "rigid-motion deviation " + fmt("%.3g", worstRigid));
  o.require(worstMirror <= 1e-9, "mirror deviation " + fmt("%.3g", worstMirror));
  if (o.pass)
    o.detail = "1000 skeletons, max error " + fmt("%.2g", worst) + " rad; rigid invariance " + fmt("%.2g", worstRigid) +
               "; mirror antisymmetry " + fmt("%.2g", worstMirror);
  return o;
}

Outcome statistics_oracles() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> x(500), y(500), z(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    y[i] = 2.5 * x[i] + 1.0;
    z[i] = -0.5 * x[i] + 3.0;
  }
  const double rPos = pearson(x, y).r, rNeg = pearson(x, z).r;
  o.require(std::abs(rPos - 1.0) <= 1e-12 && std::abs(rNeg + 1.0) <= 1e-12, "affine r off by " + fmt("%.3g", std::max(std::abs(rPos - 1), std::abs(rNeg + 1))));

  const double t = 0.5 * std::sqrt(98.0) / std::sqrt(0.75);
  const double df = 98.0;
  const double p = student_t_two_sided_p(t, df);
  const double oracle = static_cast<double>(testsupport::beta_quadrature(df / 2, 0.5L, df / (df + t * t)));
  o.require(std::abs(p - oracle) <= 1e-8, "p " + fmt("%.12g", p) + " vs oracle " + fmt("%.12g", oracle));

  std::mt19937_64 g(10000);
  std::normal_distribution<double> n01, eps(0.0, 0.1);
  std::vector<double> gx(10000), gy(10000);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    gx[i] = n01(g);
    gy[i] = gx[i] + eps(g);
  }
  const RegressionBand band = fit_prediction_interval(gx, gy);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < gx.size(); ++i) inside += (gy[i] >= band.lower(gx[i]) && gy[i] <= band.upper(gx[i])) ? 1 : 0;
  const double coverage = static_cast<double>(inside) / static_cast<double>(gx.size());
  o.require(coverage >= 0.93 && coverage <= 0.97, "coverage " + fmt("%.4f", coverage));
  if (o.pass)
    o.detail = "|r| = 1 within " + fmt("%.1g", std::max(std::abs(rPos - 1), std::abs(rNeg + 1))) + "; p(0.5, 100) = " + fmt("%.10e", p) +
               ", oracle diff " + fmt("%.1g", std::abs(p - oracle)) + "; coverage " + fmt("%.4f", coverage);
  return o;
}

const PipelineResult& cohort() {
  static const PipelineResult result = [] {
    PipelineOptions opt;
    opt.subjects = 50;
    opt.seed = 1;
    return run_synthetic_pipeline(opt);
  }();
  return result;
}

Outcome head_path_trend() {
  Outcome o;
  const LevelSummary& s = cohort().report.summary;
  std::array<double, 3> pooled{};
  for (int level = 1; level <= 3; ++level) {
    double sum = 0.0;
    std::size_t n = 0;
    for (bool avatar : {true, false}) {
      const MeanStd& m = s.headDistance.at({level, avatar});
      sum += m.mean * static_cast<double>(m.n);
      n += m.n;
    }
    pooled[level - 1] = sum / static_cast<double>(n);
  }
  o.require(pooled[0] < pooled[1] && pooled[1] < pooled[2], "pooled means not increasing");
  for (bool avatar : {true, false}) {
    const double a = s.headDistance.at({1, avatar}).mean, b = s.headDistance.at({2, avatar}).mean, c = s.headDistance.at({3, avatar}).mean;
    o.require(a < b && b < c, std::string(avatar ? "w" : "w/o") + " means not increasing");
  }
  o.detail = "mean head path " + fmt("%.2f", pooled[0]) + " / " + fmt("%.2f", pooled[1]) + " / " + fmt("%.2f", pooled[2]) + " m" +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome sagittal_trend() {
  Outcome o;
  const LevelSummary& s = cohort().report.summary;
  const auto sag = static_cast<std::size_t>(Angle::Sagittal);
  const double a = s.angleMax.at(1)[sag]->mean, b = s.angleMax.at(2)[sag]->mean, c = s.angleMax.at(3)[sag]->mean;
  o.require(a < b && b < c, "not strictly increasing");
  o.detail = "mean max sagittal " + fmt("%.2f", a) + " / " + fmt("%.2f", b) + " / " + fmt("%.2f", c) + " deg" + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome correlation_categories() {
  Outcome o;
  const AnalysisReport& rep = cohort().report;
  const auto xs = reported_category(rep, PoseChannel::X, Angle::Sagittal);
  const auto zf = reported_category(rep, PoseChannel::Z, Angle::Frontal);
  const auto& xsCell = rep.meanAbsR[0][static_cast<std::size_t>(Angle::Sagittal)];
  const auto& zfCell = rep.meanAbsR[static_cast<std::size_t>(PoseChannel::Z)][static_cast<std::size_t>(Angle::Frontal)];
  o.require(xs == CorrelationCategory::VeryHigh, "(x, sagittal) not very high");
  o.require(zf && *zf >= CorrelationCategory::High, "(z, frontal) below high");
  std::size_t cells = 0, small = 0;
  std::vector<std::string> weak;
  double worstP = 0.0;
  for (std::size_t c = 0; c < kPoseChannelCount; ++c)
    for (std::size_t a = 0; a < kAngleCount; ++a) {
      const auto& cell = rep.pooled.cells[c][a];
      if (!cell) continue;
      ++cells;
      small += cell->n >= 1000 ? 0 : 1;
      worstP = std::max(worstP, cell->p);
      if (!(cell->p < 0.01))
        weak.push_back("(" + std::string(pose_channel_name(cell->channel)) + ", " + std::string(angle_key(cell->angle)) + ") p=" +
                       fmt("%.3g", cell->p) + " r=" + fmt("%.3g", cell->r));
    }
  o.require(small == 0, std::to_string(small) + " cells with n < 1000");
  if (!weak.empty()) {
    std::string list;
    for (const auto& w : weak) list += (list.empty() ? "" : ", ") + w;
    o.require(false, std::to_string(weak.size()) + " of " + std::to_string(cells) + " cells with p >= 0.01: " + list);
  }
  std::string summary = "(x, sagittal) |r| " + fmt("%.3f", xsCell ? xsCell->mean : 0.0) + "; (z, frontal) |r| " +
                        fmt("%.3f", zfCell ? zfCell->mean : 0.0) + "; " + std::to_string(cells) + " pooled cells, max p " + fmt("%.3g", worstP);
  o.detail = o.pass ? summary : summary + " (" + o.detail + ")";
  return o;
}

Outcome service_equivalence() {
  Outcome o;
  const fs::path logDir = scratch_root() / "service-logs";
  ServerOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.session.logDir = logDir;
  Server server(opt);
  server.start();
  const unsigned short port = server.port();

  const auto health = testsupport::http_request(port, "/health");
  o.require(health.status == 200 && health.body == "ok", "/health returned " + std::to_string(health.status));

  const CalibrationSession cal = synthesize_calibration(random_subject(1, 0), 1);
  const CalibrationProfile expectedProfile = run_calibration(cal.head, cal.schedule);
  const Level level = generate_level(difficulty_preset(1, 42));
  const auto trace = synthesize_skier_trace(level, expectedProfile);
  RunLog expected = run_headless(level, expectedProfile, trace);
  expected.levelId = 1;

  std::optional<Json> complete;
  std::size_t errors = 0;
  auto sink = [&](const Json& m) {
    if (m.at("type") == "RUN_COMPLETE") complete = m;
    if (m.at("type") == "ERROR") ++errors;
  };
  auto pose_json = [](const HeadPoseSample& s) {
    return Json{{"t", s.t}, {"pos", {s.pos.x, s.pos.y, s.pos.z}}, {"orient", {s.orient.x, s.orient.y, s.orient.z}}};
  };
  {
    testsupport::WsClient ws(port);
    ws.send("HELLO");
    ws.read_until("WELCOME");
    for (std::size_t w = 0; w < kCalibrationPhases; ++w) {
      const auto phase = static_cast<CalibrationPhase>(w);
      const std::string name(calibration_phase_name(phase));
      ws.send("CALIBRATE_WINDOW", {{"window", name}, {"action", "begin"}});
      for (const auto& s : cal.head)
        if (s.t >= cal.schedule[phase].begin && s.t <= cal.schedule[phase].end) ws.send("HEAD_POSE", pose_json(s));
      ws.send("CALIBRATE_WINDOW", {{"window", name}, {"action", "end"}});
      ws.drain(sink);
    }
    const Json result = ws.read_until("CALIBRATION_RESULT", sink);
    o.require(profile_from_json(result["payload"]["profile"]) == expectedProfile, "calibration profile differs");
    ws.send("START_LEVEL", {{"level", 1}, {"seed", 42}, {"clock", "lockstep"}});
    ws.read_until("STATE", sink);
    for (const auto& s : trace) {
      if (complete) break;
      ws.send("HEAD_POSE", pose_json(s));
      ws.drain(sink);
    }
    if (!complete) ws.read_until("RUN_COMPLETE", sink);
  }
  server.stop();
  o.require(errors == 0, std::to_string(errors) + " ERROR messages");
  if (!complete) {
    o.require(false, "no RUN_COMPLETE");
    return o;
  }
  const fs::path logPath = (*complete)["payload"]["log"].get<std::string>();
  o.require(fs::exists(logPath), "persisted log missing");
  if (!o.pass) return o;
  const std::string persisted = read_text_file(logPath);
  o.require(parse_run_log(persisted) == expected, "persisted RunLog differs from run_headless");
  o.require(persisted == serialize_run_log(expected), "persisted RunLog bytes differ from run_headless");
  if (o.pass)
    o.detail = "RunLog of " + std::to_string(expected.states.size()) + " steps bit-identical, score " +
               std::to_string(expected.states.back().score) + "/" + std::to_string(level.props.cubes.size()) + "; /health 200";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"determinism", determinism},
      {"terrain properties", terrain_properties},
      {"physics symmetry", physics_symmetry},
      {"upright damping", upright_damping},
      {"angle oracle", angle_oracle},
      {"statistics oracles", statistics_oracles},
      {"head path trend", head_path_trend},
      {"sagittal movement trend", sagittal_trend},
      {"correlation categories", correlation_categories},
      {"service equivalence", service_equivalence},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
