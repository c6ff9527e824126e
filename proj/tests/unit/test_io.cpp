#include <doctest.h>

#include <filesystem>
#include <random>

#include "skitrain/io.hpp"
#include "support.hpp"

using namespace skitrain;

namespace {

CalibrationProfile profile() {
  CalibrationProfile p;
  p.xLeft = 0.1 + 1.0 / 3.0;
  p.xRight = 0.2;
  p.zFront = 0.17;
  p.zBack = 0.09;
  p.yUpright = 1.7;
  p.stanceOffset = 0.0325;
  p.xCenter = -0.01;
  p.zCenter = 1e-17;
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

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("base64") {
  std::vector<unsigned char> bytes;
  for (int i = 0; i < 300; ++i) {
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
    bytes.push_back(static_cast<unsigned char>(i * 37));
  }
  const std::string text = "foobar";
  const std::vector<unsigned char> raw(text.begin(), text.end());
  CHECK(base64_encode(std::span(raw).first(1)) == "Zg==");
  CHECK(base64_encode(std::span(raw).first(2)) == "Zm8=");
  CHECK(base64_encode(raw) == "Zm9vYmFy");
  CHECK(kind_of([] { base64_decode("Zm9v!mFy"); }) == ErrorKind::ParseError);
}

TEST_CASE("level file round-trip") {
  for (int level = 1; level <= 3; ++level) {
    const Level lv = generate_level(difficulty_preset(level, 100 + level));
    const std::string text = serialize_level(lv);
    const Level back = parse_level(text);
    CHECK(back == lv);
    CHECK(serialize_level(back) == text);
  }
  CHECK(kind_of([] { parse_level("{\"v\": 1}"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_level("not json"); }) == ErrorKind::ParseError);
}

TEST_CASE("level file on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "skitrain-io-test";
  std::filesystem::create_directories(dir);
  const Level lv = generate_level(difficulty_preset(2, 3));
  write_file_atomic(dir / "level.json", serialize_level(lv));
  CHECK(load_level(dir / "level.json") == lv);
  CHECK(kind_of([&] { load_level(dir / "missing.json"); }) == ErrorKind::IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("profile, schedule and params JSON") {
  CHECK(profile_from_json(to_json(profile())) == profile());
  CalibrationSchedule s;
  for (std::size_t i = 0; i < kCalibrationPhases; ++i) s.windows[i] = {1.5 * i, 1.5 * i + 1.0 / 3.0};
  const CalibrationSchedule back = schedule_from_json(to_json(s));
  for (std::size_t i = 0; i < kCalibrationPhases; ++i) {
    CHECK(back.windows[i].begin == s.windows[i].begin);
    CHECK(back.windows[i].end == s.windows[i].end);
  }
  SimParams p;
  p.yawGain = 3.14159;
  CHECK(sim_params_from_json(to_json(p)) == p);
  Json broken = to_json(profile());
  broken.erase("xLeft");
  CHECK(kind_of([&] { profile_from_json(broken); }) == ErrorKind::ParseError);
}

TEST_CASE("run log round-trip") {
  const Level lv = generate_level(difficulty_preset(1, 4));
  const RunLog log = run_headless(lv, profile(), synthesize_skier_trace(lv, profile()));
  REQUIRE(!log.events.empty());
  const std::string text = serialize_run_log(log);
  const RunLog back = parse_run_log(text);
  CHECK(back == log);
  CHECK(serialize_run_log(back) == text);
  const auto firstBreak = text.find('\n');
  const Json header = Json::parse(text.substr(0, firstBreak));
  CHECK(header.contains("state0"));
  CHECK(header.contains("params"));
  CHECK(header.contains("levelSeed"));
  RunLog failed = log;
  failed.finished = false;
  failed.failure = "OutOfTerrain: left the map";
  CHECK(parse_run_log(serialize_run_log(failed)) == failed);
  CHECK_THROWS_AS(parse_run_log(text.substr(0, firstBreak / 2)), Error);
}

TEST_CASE("head trace CSV round-trip") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<HeadPoseSample> trace;
  for (int i = 0; i < 100; ++i) trace.push_back({0.02 * i, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}});
  const std::string csv = head_trace_to_csv(trace);
  CHECK(csv.rfind("t,x,y,z,rx,ry,rz\n", 0) == 0);
  const auto back = head_trace_from_csv(csv);
  REQUIRE(back.size() == trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(back[i].t == trace[i].t);
    CHECK(back[i].pos == trace[i].pos);
    CHECK(back[i].orient == trace[i].orient);
  }
  CHECK(kind_of([] { head_trace_from_csv("t,x,y,z,rx,ry,rz\n0,1,2\n"); }) == ErrorKind::ParseError);
}

TEST_CASE("skeleton JSON Lines round-trip") {
  std::vector<SkeletonFrame> frames;
  for (int i = 0; i < 10; ++i) {
    auto f = testsupport::upright_skeleton(0.04 * i, 1 + i % 2);
    f[JointName::KNEE_L].conf = Confidence::LOW;
    f[JointName::HEAD].pos.x = 1.0 / 7.0;
    frames.push_back(f);
  }
  const std::string text = skeleton_to_jsonl(frames);
  const auto back = skeleton_from_jsonl(text);
  CHECK(back == frames);
  CHECK(skeleton_to_jsonl(back) == text);
  CHECK(kind_of([] { skeleton_from_jsonl("{\"t\": 0}\n"); }) == ErrorKind::ParseError);
}

TEST_CASE("PGM export") {
  const Level lv = generate_level(difficulty_preset(1, 2));
  const std::string pgm = heightmap_to_pgm(lv.heightmap);
  CHECK(pgm.rfind("P5\n", 0) == 0);
  const std::string dims = std::to_string(lv.heightmap.cols) + " " + std::to_string(lv.heightmap.rows) + "\n255\n";
  const auto pos = pgm.find(dims);
  REQUIRE(pos != std::string::npos);
  CHECK(pgm.size() - (pos + dims.size()) == lv.heightmap.heights.size());
}
