#include "skitrain/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "skitrain/version.hpp"

namespace skitrain {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot rename to " + path.string() + ": " + ec.message());
}

namespace {

constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += kB64[v & 63];
  }
  if (const std::size_t rest = bytes.size() - i; rest > 0) {
    unsigned v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += rest == 2 ? kB64[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(ErrorKind::ParseError, "base64 length is not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0 || (v[k] = b64_value(c)) < 0) throw Error(ErrorKind::ParseError, "invalid base64 input");
    }
    const unsigned w = (static_cast<unsigned>(v[0]) << 18) | (static_cast<unsigned>(v[1]) << 12) |
                       (static_cast<unsigned>(v[2]) << 6) | static_cast<unsigned>(v[3]);
    out.push_back(static_cast<unsigned char>(w >> 16));
    if (pad < 2) out.push_back(static_cast<unsigned char>(w >> 8));
    if (pad < 1) out.push_back(static_cast<unsigned char>(w));
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::ParseError, std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  return j.is_object() && j.contains(key) ? field<T>(j, key) : fallback;
}

Json vec(Vec2 v) { return Json::array({v.x, v.z}); }
Json vec(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Vec2 vec2_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::ParseError, "expected [x, z]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Vec3 vec3_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::ParseError, "expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

/// Runs `f`, translating stray json exceptions into ParseError.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const LevelParams& p) {
  return {{"seed", p.seed},
          {"curveRadiusRange", {p.radiusMin, p.radiusMax}},
          {"numCurves", p.numCurves},
          {"baseSlope", p.baseSlope},
          {"noiseAmplitude", p.noiseAmplitude},
          {"noiseCellSize", p.noiseCellSize},
          {"corridorHalfWidth", p.corridorHalfWidth},
          {"cubeSpacing", p.cubeSpacing},
          {"trackLength", p.trackLength},
          {"headingMin", p.headingMin},
          {"headingMax", p.headingMax},
          {"gridCellSize", p.gridCellSize},
          {"propSpacing", p.propSpacing}};
}

LevelParams level_params_from_json(const Json& j) {
  return guarded("level params", [&] {
    LevelParams p;
    p.seed = field<std::uint64_t>(j, "seed");
    const auto range = field<std::vector<double>>(j, "curveRadiusRange");
    if (range.size() != 2) throw Error(ErrorKind::ParseError, "curveRadiusRange needs two values");
    p.radiusMin = range[0];
    p.radiusMax = range[1];
    p.numCurves = field<int>(j, "numCurves");
    p.baseSlope = field<double>(j, "baseSlope");
    p.noiseAmplitude = field<double>(j, "noiseAmplitude");
    p.noiseCellSize = field<double>(j, "noiseCellSize");
    p.corridorHalfWidth = field<double>(j, "corridorHalfWidth");
    p.cubeSpacing = field<double>(j, "cubeSpacing");
    p.trackLength = field<double>(j, "trackLength");
    const LevelParams defaults;
    p.headingMin = field_or(j, "headingMin", defaults.headingMin);
    p.headingMax = field_or(j, "headingMax", defaults.headingMax);
    p.gridCellSize = field_or(j, "gridCellSize", defaults.gridCellSize);
    p.propSpacing = field_or(j, "propSpacing", defaults.propSpacing);
    return p;
  });
}

Json to_json(const Track& t) {
  Json arcs = Json::array();
  for (const auto& a : t.arcs)
    arcs.push_back({{"center", vec(a.center)}, {"radius", a.radius}, {"startAngle", a.startAngle}, {"sweep", a.sweep}});
  return {{"arcs", arcs}, {"start", vec(t.start)}, {"goalArcLength", t.goalArcLength}};
}

Track track_from_json(const Json& j) {
  return guarded("track", [&] {
    Track t;
    for (const auto& a : field<Json>(j, "arcs")) {
      Arc arc;
      arc.center = vec2_from(field<Json>(a, "center"));
      arc.radius = field<double>(a, "radius");
      arc.startAngle = field<double>(a, "startAngle");
      arc.sweep = field<double>(a, "sweep");
      t.arcs.push_back(arc);
    }
    t.start = vec2_from(field<Json>(j, "start"));
    t.goalArcLength = field<double>(j, "goalArcLength");
    return t;
  });
}

Json to_json(const Heightmap& hm) {
  std::vector<unsigned char> bytes(hm.heights.size() * 4);
  for (std::size_t i = 0; i < hm.heights.size(); ++i) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(hm.heights[i]);
    for (int k = 0; k < 4; ++k) bytes[i * 4 + k] = static_cast<unsigned char>(bits >> (8 * k));
  }
  return {{"originXZ", vec(hm.originXZ)},
          {"cellSize", hm.cellSize},
          {"rows", hm.rows},
          {"cols", hm.cols},
          {"encoding", "base64-f32le"},
          {"heights", base64_encode(bytes)}};
}

Heightmap heightmap_from_json(const Json& j) {
  return guarded("heightmap", [&] {
    Heightmap hm;
    hm.originXZ = vec2_from(field<Json>(j, "originXZ"));
    hm.cellSize = field<double>(j, "cellSize");
    hm.rows = field<int>(j, "rows");
    hm.cols = field<int>(j, "cols");
    if (hm.rows < 2 || hm.cols < 2) throw Error(ErrorKind::ParseError, "heightmap needs at least 2x2 nodes");
    const auto bytes = base64_decode(field<std::string>(j, "heights"));
    const std::size_t n = static_cast<std::size_t>(hm.rows) * static_cast<std::size_t>(hm.cols);
    if (bytes.size() != n * 4) throw Error(ErrorKind::ParseError, "heightmap payload size does not match rows*cols");
    hm.heights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t bits = 0;
      for (int k = 0; k < 4; ++k) bits |= static_cast<std::uint32_t>(bytes[i * 4 + k]) << (8 * k);
      hm.heights[i] = std::bit_cast<float>(bits);
    }
    return hm;
  });
}

Json to_json(const PropSet& props) {
  Json poles = Json::array(), trees = Json::array(), cubes = Json::array();
  for (const auto& p : props.poles) poles.push_back(vec(p));
  for (const auto& t : props.trees) trees.push_back(vec(t));
  for (const auto& c : props.cubes) cubes.push_back({{"pos", vec(c.pos)}, {"s", c.s}, {"collected", c.collected}});
  return {{"poles", poles}, {"trees", trees}, {"cubes", cubes}};
}

PropSet props_from_json(const Json& j) {
  return guarded("props", [&] {
    PropSet p;
    for (const auto& v : field<Json>(j, "poles")) p.poles.push_back(vec3_from(v));
    for (const auto& v : field<Json>(j, "trees")) p.trees.push_back(vec3_from(v));
    for (const auto& c : field<Json>(j, "cubes"))
      p.cubes.push_back({vec3_from(field<Json>(c, "pos")), field<double>(c, "s"), field<bool>(c, "collected")});
    return p;
  });
}

Json to_json(const CalibrationProfile& p) {
  return {{"xLeft", p.xLeft},         {"xRight", p.xRight},   {"zFront", p.zFront},   {"zBack", p.zBack},
          {"yUpright", p.yUpright},   {"stanceOffset", p.stanceOffset}, {"xCenter", p.xCenter}, {"zCenter", p.zCenter}};
}

CalibrationProfile profile_from_json(const Json& j) {
  return guarded("profile", [&] {
    CalibrationProfile p;
    p.xLeft = field<double>(j, "xLeft");
    p.xRight = field<double>(j, "xRight");
    p.zFront = field<double>(j, "zFront");
    p.zBack = field<double>(j, "zBack");
    p.yUpright = field<double>(j, "yUpright");
    p.stanceOffset = field<double>(j, "stanceOffset");
    p.xCenter = field_or(j, "xCenter", 0.0);
    p.zCenter = field_or(j, "zCenter", 0.0);
    return p;
  });
}

Json to_json(const CalibrationSchedule& s) {
  Json j = Json::object();
  for (std::size_t i = 0; i < kCalibrationPhases; ++i)
    j[std::string(calibration_phase_name(static_cast<CalibrationPhase>(i)))] = {s.windows[i].begin, s.windows[i].end};
  return j;
}

CalibrationSchedule schedule_from_json(const Json& j) {
  return guarded("schedule", [&] {
    CalibrationSchedule s;
    for (std::size_t i = 0; i < kCalibrationPhases; ++i) {
      const std::string key(calibration_phase_name(static_cast<CalibrationPhase>(i)));
      const auto w = field<std::vector<double>>(j, key.c_str());
      if (w.size() != 2) throw Error(ErrorKind::ParseError, "window '" + key + "' needs [begin, end]");
      s.windows[i] = {w[0], w[1]};
    }
    return s;
  });
}

Json to_json(const SimParams& p) {
  return {{"dt", p.dt},
          {"gravity", p.gravity},
          {"yawGain", p.yawGain},
          {"yawDamping", p.yawDamping},
          {"speedGain", p.speedGain},
          {"frictionCoeff", p.frictionCoeff},
          {"uprightPenalty", p.uprightPenalty},
          {"maxSpeed", p.maxSpeed},
          {"cubeRadius", p.cubeRadius}};
}

SimParams sim_params_from_json(const Json& j) {
  return guarded("sim params", [&] {
    const SimParams d;
    SimParams p;
    p.dt = field_or(j, "dt", d.dt);
    p.gravity = field_or(j, "gravity", d.gravity);
    p.yawGain = field_or(j, "yawGain", d.yawGain);
    p.yawDamping = field_or(j, "yawDamping", d.yawDamping);
    p.speedGain = field_or(j, "speedGain", d.speedGain);
    p.frictionCoeff = field_or(j, "frictionCoeff", d.frictionCoeff);
    p.uprightPenalty = field_or(j, "uprightPenalty", d.uprightPenalty);
    p.maxSpeed = field_or(j, "maxSpeed", d.maxSpeed);
    p.cubeRadius = field_or(j, "cubeRadius", d.cubeRadius);
    return p;
  });
}

Json to_json(const ControlInput& in) { return {{"uLat", in.uLat}, {"uFore", in.uFore}, {"upright", in.upright}}; }

ControlInput control_input_from_json(const Json& j) {
  return guarded("input", [&] {
    return ControlInput{field<double>(j, "uLat"), field<double>(j, "uFore"), field<bool>(j, "upright")};
  });
}

Json to_json(const PlayerState& s) {
  return {{"pos", vec(s.posXZ)}, {"heading", s.heading}, {"speed", s.speed},
          {"yawRate", s.yawRate}, {"score", s.score},    {"t", s.t}};
}

PlayerState player_state_from_json(const Json& j) {
  return guarded("state", [&] {
    PlayerState s;
    s.posXZ = vec2_from(field<Json>(j, "pos"));
    s.heading = field<double>(j, "heading");
    s.speed = field<double>(j, "speed");
    s.yawRate = field<double>(j, "yawRate");
    s.score = field<int>(j, "score");
    s.t = field<double>(j, "t");
    return s;
  });
}

Json to_json(const SimEvent& e) {
  Json j = {{"t", e.t}, {"kind", std::string(event_kind_name(e.kind))}};
  if (e.cube >= 0) j["cube"] = e.cube;
  return j;
}

SimEvent sim_event_from_json(const Json& j) {
  return guarded("event", [&] {
    SimEvent e;
    e.t = field<double>(j, "t");
    const auto kind = parse_event_kind(field<std::string>(j, "kind"));
    if (!kind) throw Error(ErrorKind::ParseError, "unknown event kind");
    e.kind = *kind;
    e.cube = field_or(j, "cube", -1);
    return e;
  });
}

// ---------------------------------------------------------------------------

std::string serialize_level(const Level& level) {
  Json j = {{"v", kLevelFormatVersion},
            {"generator", std::string(kVersionTag)},
            {"params", to_json(level.params)},
            {"track", to_json(level.track)},
            {"heightmap", to_json(level.heightmap)},
            {"props", to_json(level.props)}};
  return j.dump() + "\n";
}

Level parse_level(std::string_view text) {
  const Json j = parse_json(text, "level file");
  const int v = guarded("level file", [&] { return field<int>(j, "v"); });
  if (v != kLevelFormatVersion) throw Error(ErrorKind::ParseError, "unsupported level format version " + std::to_string(v));
  Level level;
  level.params = level_params_from_json(field<Json>(j, "params"));
  level.params.validate();
  level.track = track_from_json(field<Json>(j, "track"));
  level.heightmap = heightmap_from_json(field<Json>(j, "heightmap"));
  level.props = props_from_json(field<Json>(j, "props"));
  return level;
}

Level load_level(const fs::path& path) { return parse_level(read_text_file(path)); }

std::string heightmap_to_pgm(const Heightmap& hm) {
  const auto [lo, hi] = std::minmax_element(hm.heights.begin(), hm.heights.end());
  const double span = hm.heights.empty() ? 0.0 : static_cast<double>(*hi) - static_cast<double>(*lo);
  std::string out = "P5\n# " + std::string(kVersionTag) + "\n" + std::to_string(hm.cols) + " " + std::to_string(hm.rows) + "\n255\n";
  for (int r = 0; r < hm.rows; ++r)
    for (int c = 0; c < hm.cols; ++c) {
      const double v = span > 0.0 ? (hm.at(r, c) - *lo) / span : 0.0;
      out += static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  while (true) {
    const auto pos = line.find(sep);
    cells.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return cells;
}

double parse_number(std::string_view cell, std::size_t lineNo) {
  while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineNo) + ": bad number '" + std::string(cell) + "'");
  return v;
}

/// Calls f(line, lineNo) for each non-empty, non-comment line.
template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t lineNo = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    f(line, lineNo);
  }
}

}  // namespace

std::string head_trace_to_csv(std::span<const HeadPoseSample> samples) {
  std::string out = "t,x,y,z,rx,ry,rz\n";
  for (const auto& s : samples) {
    for (double v : {s.t, s.pos.x, s.pos.y, s.pos.z, s.orient.x, s.orient.y}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(s.orient.z);
    out += '\n';
  }
  return out;
}

std::vector<HeadPoseSample> head_trace_from_csv(std::string_view text) {
  std::vector<HeadPoseSample> out;
  bool header = false;
  for_each_line(text, [&](std::string_view line, std::size_t lineNo) {
    if (!header) {
      header = true;
      if (line != "t,x,y,z,rx,ry,rz") throw Error(ErrorKind::ParseError, "head CSV header must be t,x,y,z,rx,ry,rz");
      return;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 7) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineNo) + ": expected 7 cells");
    double v[7];
    for (int i = 0; i < 7; ++i) v[i] = parse_number(cells[i], lineNo);
    out.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}});
  });
  if (!header) throw Error(ErrorKind::ParseError, "head CSV is empty");
  return out;
}

// ---------------------------------------------------------------------------

Json to_json(const SkeletonFrame& frame) {
  Json joints = Json::object();
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const auto& js = frame.joints[i];
    joints[std::string(joint_name(joint_at(i)))] = {{"p", vec(js.pos)}, {"c", std::string(confidence_name(js.conf))}};
  }
  return {{"t", frame.t}, {"camera", frame.camera}, {"joints", joints}};
}

SkeletonFrame skeleton_frame_from_json(const Json& j) {
  return guarded("skeleton frame", [&] {
    SkeletonFrame f;
    f.t = field<double>(j, "t");
    f.camera = field<int>(j, "camera");
    const Json joints = field<Json>(j, "joints");
    for (const auto& [name, js] : joints.items()) {
      const auto joint = parse_joint_name(name);
      if (!joint) throw Error(ErrorKind::ParseError, "unknown joint '" + name + "'");
      const auto conf = parse_confidence(field<std::string>(js, "c"));
      if (!conf) throw Error(ErrorKind::ParseError, "unknown confidence for joint '" + name + "'");
      f[*joint] = {vec3_from(field<Json>(js, "p")), *conf};
    }
    return f;
  });
}

std::string skeleton_to_jsonl(std::span<const SkeletonFrame> frames) {
  std::string out = Json{{"generator", std::string(kVersionTag)}}.dump() + "\n";
  for (const auto& f : frames) out += to_json(f).dump() + "\n";
  return out;
}

std::vector<SkeletonFrame> skeleton_from_jsonl(std::string_view text) {
  std::vector<SkeletonFrame> out;
  for_each_line(text, [&](std::string_view line, std::size_t lineNo) {
    const Json j = parse_json(line, ("skeleton line " + std::to_string(lineNo)).c_str());
    if (j.is_object() && !j.contains("joints") && j.contains("generator")) return;
    out.push_back(skeleton_frame_from_json(j));
  });
  return out;
}

// ---------------------------------------------------------------------------

std::string serialize_run_log(const RunLog& log) {
  std::string out;
  Json header = {{"type", "header"},
                 {"generator", std::string(kVersionTag)},
                 {"levelSeed", log.levelSeed},
                 {"levelId", log.levelId},
                 {"profile", to_json(log.profile)},
                 {"params", to_json(log.params)},
                 {"state0", to_json(log.state0)}};
  out += header.dump() + "\n";
  for (std::size_t i = 0; i < log.states.size(); ++i) {
    Json step = {{"type", "step"}, {"t", log.states[i].t}, {"input", to_json(log.inputs[i])}, {"state", to_json(log.states[i])}};
    out += step.dump() + "\n";
  }
  for (const auto& e : log.events) {
    Json j = to_json(e);
    j["type"] = "event";
    out += j.dump() + "\n";
  }
  Json outcome = {{"type", "outcome"}, {"finished", log.finished}, {"finishTime", log.finishTime}};
  if (!log.failure.empty()) outcome["failure"] = log.failure;
  out += outcome.dump() + "\n";
  return out;
}

RunLog parse_run_log(std::string_view text) {
  RunLog log;
  bool header = false, outcome = false;
  for_each_line(text, [&](std::string_view line, std::size_t lineNo) {
    const Json j = parse_json(line, ("run log line " + std::to_string(lineNo)).c_str());
    const auto type = guarded("run log", [&] { return field<std::string>(j, "type"); });
    if (type == "header") {
      header = true;
      log.levelSeed = field<std::uint64_t>(j, "levelSeed");
      log.levelId = field_or(j, "levelId", 0);
      log.profile = profile_from_json(field<Json>(j, "profile"));
      log.params = sim_params_from_json(field<Json>(j, "params"));
      log.state0 = player_state_from_json(field<Json>(j, "state0"));
    } else if (type == "step") {
      log.inputs.push_back(control_input_from_json(field<Json>(j, "input")));
      log.states.push_back(player_state_from_json(field<Json>(j, "state")));
    } else if (type == "event") {
      log.events.push_back(sim_event_from_json(j));
    } else if (type == "outcome") {
      outcome = true;
      log.finished = field<bool>(j, "finished");
      log.finishTime = field<double>(j, "finishTime");
      log.failure = field_or<std::string>(j, "failure", "");
    } else {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineNo) + ": unknown record type '" + type + "'");
    }
  });
  if (!header) throw Error(ErrorKind::ParseError, "run log has no header line");
  if (!outcome) throw Error(ErrorKind::ParseError, "run log has no outcome line");
  return log;
}

}  // namespace skitrain
