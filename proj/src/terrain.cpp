#include "skitrain/terrain.hpp"

#include <algorithm>
#include <limits>

#include "skitrain/error.hpp"
#include "skitrain/rng.hpp"

namespace skitrain {

double LevelParams::guaranteed_length() const {
  if (numCurves < 1) return 0.0;
  // First arc turns from heading 0 to >= headingMin; each later arc swings
  // across the fall line by at least 2 * headingMin.
  return radiusMin * headingMin * (1.0 + 2.0 * static_cast<double>(numCurves - 1));
}

void LevelParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParams, what); };
  if (!(radiusMin > 0.0) || !(radiusMin <= radiusMax) || !std::isfinite(radiusMax))
    fail("need 0 < radiusMin <= radiusMax");
  if (numCurves < 1) fail("numCurves must be >= 1");
  if (!(baseSlope > 0.0 && baseSlope < kPi / 2)) fail("baseSlope must be in (0, pi/2)");
  if (!(noiseAmplitude >= 0.0) || !std::isfinite(noiseAmplitude)) fail("noiseAmplitude must be >= 0");
  if (!(corridorHalfWidth > 0.0)) fail("corridorHalfWidth must be > 0");
  if (!(corridorHalfWidth < radiusMin)) fail("corridorHalfWidth must be smaller than radiusMin");
  if (!(cubeSpacing > 0.0)) fail("cubeSpacing must be > 0");
  if (!(gridCellSize > 0.0)) fail("gridCellSize must be > 0");
  if (!(propSpacing > 0.0)) fail("propSpacing must be > 0");
  if (!(headingMin > 0.0 && headingMin <= headingMax && headingMax <= deg_to_rad(80.0)))
    fail("need 0 < headingMin <= headingMax <= 80 deg");
  const double ratio = noiseCellSize / gridCellSize;
  if (!(noiseCellSize > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0)
    fail("noiseCellSize must be a positive integer multiple of gridCellSize");
  if (!(trackLength > 0.0) || trackLength > guaranteed_length() + 1e-9)
    fail("trackLength must be in (0, " + std::to_string(guaranteed_length()) + "] for these radii and curve count");
}

LevelParams difficulty_preset(int level, std::uint64_t seed) {
  LevelParams p;
  p.seed = seed;
  switch (level) {
    case 1:
      p.radiusMin = 18.0;
      p.radiusMax = 25.0;
      p.numCurves = 4;
      p.baseSlope = deg_to_rad(8.0);
      p.noiseAmplitude = 0.2;
      p.corridorHalfWidth = 6.0;
      p.trackLength = 80.0;
      break;
    case 2:
      p.radiusMin = 12.0;
      p.radiusMax = 17.0;
      p.numCurves = 5;
      p.baseSlope = deg_to_rad(11.0);
      p.noiseAmplitude = 0.35;
      p.corridorHalfWidth = 5.5;
      p.trackLength = 70.0;
      break;
    case 3:
      p.radiusMin = 7.0;
      p.radiusMax = 11.0;
      p.numCurves = 6;
      p.baseSlope = deg_to_rad(14.0);
      p.noiseAmplitude = 0.5;
      p.corridorHalfWidth = 5.0;
      p.trackLength = 50.0;
      break;
    default:
      throw Error(ErrorKind::UnknownLevel, "level must be 1, 2 or 3, got " + std::to_string(level));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Arcs and track

Vec2 Arc::point_at(double u) const {
  const double phi = startAngle + turn() * u / radius;
  return {center.x + radius * std::cos(phi), center.z + radius * std::sin(phi)};
}

double Arc::heading_at(double u) const {
  const double phi = startAngle + turn() * u / radius;
  return wrap_angle(sweep > 0.0 ? phi + kPi : phi);
}

double Track::length() const {
  double total = 0.0;
  for (const auto& a : arcs) total += a.length();
  return total;
}

namespace {

/// Arc containing arc length s (clamped to the track) and the local offset.
std::pair<const Arc*, double> locate(const Track& track, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < track.arcs.size(); ++i) {
    const double len = track.arcs[i].length();
    if (s <= acc + len || i + 1 == track.arcs.size()) return {&track.arcs[i], std::clamp(s - acc, 0.0, len)};
    acc += len;
  }
  return {nullptr, 0.0};
}

}  // namespace

Vec2 Track::point_at(double s) const {
  if (arcs.empty()) return start + heading_direction(0.0) * s;
  if (s < 0.0) return start + heading_direction(arcs.front().heading_at(0.0)) * s;
  const double len = length();
  if (s > len) {
    const Arc& last = arcs.back();
    return last.point_at(last.length()) + heading_direction(last.heading_at(last.length())) * (s - len);
  }
  const auto [arc, u] = locate(*this, s);
  return arc->point_at(u);
}

double Track::heading_at(double s) const {
  if (arcs.empty()) return 0.0;
  if (s < 0.0) return arcs.front().heading_at(0.0);
  if (s > length()) return arcs.back().heading_at(arcs.back().length());
  const auto [arc, u] = locate(*this, s);
  return arc->heading_at(u);
}

double Track::curvature_at(double s) const {
  if (arcs.empty() || s < 0.0 || s > length()) return 0.0;
  return locate(*this, s).first->curvature();
}

TrackProjection Track::project(Vec2 p) const {
  TrackProjection best;
  double bestDist = std::numeric_limits<double>::infinity();
  auto consider = [&](double s, Vec2 q, double heading) {
    const double d = (p - q).norm();
    if (d < bestDist) {
      bestDist = d;
      best.s = s;
      best.point = q;
      best.heading = heading;
    }
  };
  if (arcs.empty()) {
    const Vec2 dir = heading_direction(0.0);
    const double s = (p - start).dot(dir);
    consider(s, start + dir * s, 0.0);
  } else {
    double acc = 0.0;
    for (const auto& a : arcs) {
      const Vec2 v = p - a.center;
      const double psi = std::atan2(v.z, v.x);
      double rel = std::fmod(a.turn() * (psi - a.startAngle), 2.0 * kPi);
      if (rel < 0.0) rel += 2.0 * kPi;
      const double span = std::abs(a.sweep);
      if (rel <= span) {
        const double u = rel * a.radius;
        consider(acc + u, a.point_at(u), a.heading_at(u));
      } else {
        consider(acc, a.point_at(0.0), a.heading_at(0.0));
        consider(acc + a.length(), a.point_at(a.length()), a.heading_at(a.length()));
      }
      acc += a.length();
    }
    // Straight extensions before the start and past the end.
    const double h0 = arcs.front().heading_at(0.0);
    const Vec2 d0 = heading_direction(h0);
    const double before = (p - start).dot(d0);
    if (before < 0.0) consider(before, start + d0 * before, h0);
    const Arc& last = arcs.back();
    const double h1 = last.heading_at(last.length());
    const Vec2 end = last.point_at(last.length());
    const Vec2 d1 = heading_direction(h1);
    const double after = (p - end).dot(d1);
    if (after > 0.0) consider(acc + after, end + d1 * after, h1);
  }
  best.lateral = (p - best.point).dot(right_normal(best.heading));
  return best;
}

Track generate_track(const LevelParams& params) {
  params.validate();
  SplitMix64 rng(params.seed, "track");
  Track track;
  track.start = {0.0, 0.0};
  double turn = rng.uniform() < 0.5 ? 1.0 : -1.0;
  double heading = 0.0;
  Vec2 pos = track.start;
  for (int k = 0; k < params.numCurves; ++k) {
    const double radius = rng.uniform(params.radiusMin, params.radiusMax);
    const double target = turn * rng.uniform(params.headingMin, params.headingMax);
    Arc arc;
    arc.radius = radius;
    arc.sweep = target - heading;
    const Vec2 toCenter = right_normal(heading) * (turn * radius);
    arc.center = pos + toCenter;
    const Vec2 fromCenter = pos - arc.center;
    arc.startAngle = std::atan2(fromCenter.z, fromCenter.x);
    track.arcs.push_back(arc);
    pos = arc.point_at(arc.length());
    heading = target;
    turn = -turn;
  }
  track.goalArcLength = track.length();
  return track;
}

// ---------------------------------------------------------------------------
// Heightmap

bool Heightmap::contains(double x, double z) const {
  constexpr double kEps = 1e-9;
  const double u = (x - originXZ.x) / cellSize;
  const double v = (z - originXZ.z) / cellSize;
  return u >= -kEps && v >= -kEps && u <= (cols - 1) + kEps && v <= (rows - 1) + kEps;
}

double base_height(const LevelParams& params, Vec2 start, Vec2 p) {
  // Downhill distance is measured along -z from the start.
  return std::tan(params.baseSlope) * (p.z - start.z);
}

std::vector<double> noise_lattice(const LevelParams& params, int latticeRows, int latticeCols) {
  SplitMix64 rng(params.seed, "noise");
  std::vector<double> values(static_cast<std::size_t>(latticeRows) * static_cast<std::size_t>(latticeCols));
  for (auto& v : values) v = rng.uniform(-params.noiseAmplitude, params.noiseAmplitude);
  return values;
}

Heightmap generate_heightmap(const Track& track, const LevelParams& params) {
  params.validate();
  double minX = track.start.x, maxX = track.start.x, minZ = track.start.z, maxZ = track.start.z;
  const double len = track.length();
  constexpr double kStep = 0.25;
  const auto samples = static_cast<std::size_t>(std::ceil(len / kStep));
  for (std::size_t i = 0; i <= samples; ++i) {
    const Vec2 q = track.point_at(std::min(len, static_cast<double>(i) * kStep));
    minX = std::min(minX, q.x);
    maxX = std::max(maxX, q.x);
    minZ = std::min(minZ, q.z);
    maxZ = std::max(maxZ, q.z);
  }
  const double margin = 2.0 * params.corridorHalfWidth;
  const double cell = params.gridCellSize;

  Heightmap hm;
  hm.cellSize = cell;
  hm.originXZ = {std::floor((minX - margin) / cell) * cell, std::floor((minZ - margin) / cell) * cell};
  hm.cols = static_cast<int>(std::ceil((maxX + margin - hm.originXZ.x) / cell)) + 1;
  hm.rows = static_cast<int>(std::ceil((maxZ + margin - hm.originXZ.z) / cell)) + 1;
  hm.cols = std::max(hm.cols, 2);
  hm.rows = std::max(hm.rows, 2);

  const int pitch = static_cast<int>(std::lround(params.noiseCellSize / cell));
  const int latRows = (hm.rows - 1 + pitch - 1) / pitch + 1;
  const int latCols = (hm.cols - 1 + pitch - 1) / pitch + 1;
  const std::vector<double> lattice = noise_lattice(params, latRows, latCols);
  auto lat = [&](int r, int c) {
    return lattice[static_cast<std::size_t>(std::min(r, latRows - 1)) * static_cast<std::size_t>(latCols) +
                   static_cast<std::size_t>(std::min(c, latCols - 1))];
  };

  hm.heights.resize(static_cast<std::size_t>(hm.rows) * static_cast<std::size_t>(hm.cols));
  for (int r = 0; r < hm.rows; ++r) {
    const int lr = r / pitch;
    const double fr = static_cast<double>(r % pitch) / pitch;
    for (int c = 0; c < hm.cols; ++c) {
      const int lc = c / pitch;
      const double fc = static_cast<double>(c % pitch) / pitch;
      const double noise = (1.0 - fr) * ((1.0 - fc) * lat(lr, lc) + fc * lat(lr, lc + 1)) +
                           fr * ((1.0 - fc) * lat(lr + 1, lc) + fc * lat(lr + 1, lc + 1));
      const double h = base_height(params, track.start, hm.node(r, c)) + noise;
      hm.heights[static_cast<std::size_t>(r) * static_cast<std::size_t>(hm.cols) + static_cast<std::size_t>(c)] =
          static_cast<float>(h);
    }
  }
  return hm;
}

namespace {

struct Patch {
  int row, col;
  double fu, fv;  // fractional offsets along x (cols) and z (rows)
};

Patch locate_patch(const Heightmap& hm, double x, double z) {
  if (!std::isfinite(x) || !std::isfinite(z) || !hm.contains(x, z))
    throw Error(ErrorKind::OutOfTerrain, "position (" + std::to_string(x) + ", " + std::to_string(z) + ") is outside the terrain");
  const double u = std::clamp((x - hm.originXZ.x) / hm.cellSize, 0.0, static_cast<double>(hm.cols - 1));
  const double v = std::clamp((z - hm.originXZ.z) / hm.cellSize, 0.0, static_cast<double>(hm.rows - 1));
  const int col = std::min(static_cast<int>(std::floor(u)), hm.cols - 2);
  const int row = std::min(static_cast<int>(std::floor(v)), hm.rows - 2);
  return {row, col, u - col, v - row};
}

}  // namespace

double sample_height(const Heightmap& hm, double x, double z) {
  const Patch p = locate_patch(hm, x, z);
  const double h00 = hm.at(p.row, p.col);
  const double h01 = hm.at(p.row, p.col + 1);
  const double h10 = hm.at(p.row + 1, p.col);
  const double h11 = hm.at(p.row + 1, p.col + 1);
  return (1.0 - p.fv) * ((1.0 - p.fu) * h00 + p.fu * h01) + p.fv * ((1.0 - p.fu) * h10 + p.fu * h11);
}

Vec2 sample_gradient(const Heightmap& hm, double x, double z) {
  const Patch p = locate_patch(hm, x, z);
  const double h00 = hm.at(p.row, p.col);
  const double h01 = hm.at(p.row, p.col + 1);
  const double h10 = hm.at(p.row + 1, p.col);
  const double h11 = hm.at(p.row + 1, p.col + 1);
  double dx = ((1.0 - p.fv) * (h01 - h00) + p.fv * (h11 - h10)) / hm.cellSize;
  double dz = ((1.0 - p.fu) * (h10 - h00) + p.fu * (h11 - h01)) / hm.cellSize;
  // On a grid line the slope across it is the mean of both adjacent cells.
  if (p.fu == 0.0 && p.col > 0) {
    const double left = ((1.0 - p.fv) * (h00 - hm.at(p.row, p.col - 1)) + p.fv * (h10 - hm.at(p.row + 1, p.col - 1))) / hm.cellSize;
    dx = 0.5 * (dx + left);
  }
  if (p.fv == 0.0 && p.row > 0) {
    const double below = ((1.0 - p.fu) * (h00 - hm.at(p.row - 1, p.col)) + p.fu * (h01 - hm.at(p.row - 1, p.col + 1))) / hm.cellSize;
    dz = 0.5 * (dz + below);
  }
  return {dx, dz};
}

// ---------------------------------------------------------------------------
// Props

PropSet place_props(const Track& track, const Heightmap& hm, const LevelParams& params) {
  PropSet props;
  const double len = track.length();
  auto lift = [&](Vec2 q) { return Vec3{q.x, sample_height(hm, q.x, q.z), q.z}; };

  const auto stations = static_cast<std::size_t>(std::floor(len / params.propSpacing + 1e-9));
  for (std::size_t i = 0; i <= stations; ++i) {
    const double s = static_cast<double>(i) * params.propSpacing;
    const Vec2 c = track.point_at(s);
    const Vec2 n = right_normal(track.heading_at(s));
    auto& bucket = i % 2 == 0 ? props.poles : props.trees;
    bucket.push_back(lift(c - n * params.corridorHalfWidth));
    bucket.push_back(lift(c + n * params.corridorHalfWidth));
  }

  const auto cubes = static_cast<std::size_t>(std::floor(len / params.cubeSpacing));
  for (std::size_t k = 1; k <= cubes; ++k) {
    const double s = static_cast<double>(k) * params.cubeSpacing;
    props.cubes.push_back({lift(track.point_at(s)), s, false});
  }
  return props;
}

Level generate_level(const LevelParams& params) {
  Level level;
  level.params = params;
  level.track = generate_track(params);
  level.heightmap = generate_heightmap(level.track, params);
  level.props = place_props(level.track, level.heightmap, params);
  return level;
}

Level mirror_level(const Level& level) {
  Level m = level;
  const double axis = level.track.start.x;
  auto flip2 = [axis](Vec2 p) { return Vec2{2.0 * axis - p.x, p.z}; };
  auto flip3 = [axis](Vec3 p) { return Vec3{2.0 * axis - p.x, p.y, p.z}; };

  m.track.start = flip2(level.track.start);
  for (auto& a : m.track.arcs) {
    a.center = flip2(a.center);
    a.startAngle = wrap_angle(kPi - a.startAngle);
    a.sweep = -a.sweep;
  }

  const Heightmap& hm = level.heightmap;
  m.heightmap.originXZ = {2.0 * axis - (hm.originXZ.x + (hm.cols - 1) * hm.cellSize), hm.originXZ.z};
  for (int r = 0; r < hm.rows; ++r)
    for (int c = 0; c < hm.cols; ++c)
      m.heightmap.heights[static_cast<std::size_t>(r) * static_cast<std::size_t>(hm.cols) + static_cast<std::size_t>(c)] =
          hm.at(r, hm.cols - 1 - c);

  for (auto& p : m.props.poles) p = flip3(p);
  for (auto& p : m.props.trees) p = flip3(p);
  for (auto& c : m.props.cubes) c.pos = flip3(c.pos);
  return m;
}

}  // namespace skitrain
