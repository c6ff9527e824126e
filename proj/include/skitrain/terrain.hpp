#pragma once

#include <cstdint>
#include <vector>

#include "skitrain/geometry.hpp"

// Horizontal-plane conventions: points are (x, z); heading 0 points
// downhill along -z and positive heading turns toward +x (right).

namespace skitrain {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Unit travel direction for a heading.
inline Vec2 heading_direction(double heading) { return {std::sin(heading), -std::cos(heading)}; }
/// Unit normal pointing to the right of travel.
inline Vec2 right_normal(double heading) { return {std::cos(heading), std::sin(heading)}; }

struct LevelParams {
  std::uint64_t seed = kDefaultSeed;
  double radiusMin = 18.0;  // m
  double radiusMax = 25.0;  // m
  int numCurves = 4;
  double baseSlope = deg_to_rad(8.0);
  double noiseAmplitude = 0.2;  // m
  double noiseCellSize = 8.0;   // m, lattice pitch; integer multiple of gridCellSize
  double corridorHalfWidth = 6.0;
  double cubeSpacing = 10.0;
  double trackLength = 80.0;  // guaranteed minimum centerline length

  // Shape controls with implementer defaults.
  double headingMin = deg_to_rad(40.0);  // |heading| targeted at the end of each arc
  double headingMax = deg_to_rad(65.0);
  double gridCellSize = 1.0;
  double propSpacing = 5.0;

  /// Shortest centerline any seed can produce with these parameters.
  double guaranteed_length() const;
  /// Throws InvalidParams on any violated invariant.
  void validate() const;

  friend bool operator==(const LevelParams&, const LevelParams&) = default;
};

/// Built-in preset for level 1, 2 or 3; any other level throws UnknownLevel.
LevelParams difficulty_preset(int level, std::uint64_t seed = kDefaultSeed);

struct Arc {
  Vec2 center;
  double radius = 1.0;
  double startAngle = 0.0;  // polar angle of the arc start about center
  double sweep = 0.0;       // signed; positive turns right

  double length() const { return radius * std::abs(sweep); }
  double turn() const { return sweep > 0.0 ? 1.0 : -1.0; }
  Vec2 point_at(double u) const;
  double heading_at(double u) const;
  double curvature() const { return turn() / radius; }

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Nearest centerline point for a horizontal position.
struct TrackProjection {
  double s = 0.0;        // arc length; negative before start, > length past the end
  double lateral = 0.0;  // signed offset, positive to the right of travel
  Vec2 point;
  double heading = 0.0;
};

struct Track {
  std::vector<Arc> arcs;
  Vec2 start;
  double goalArcLength = 0.0;

  double length() const;
  Vec2 point_at(double s) const;
  double heading_at(double s) const;
  /// Signed curvature (1/m, positive right) at arc length s; 0 beyond the ends.
  double curvature_at(double s) const;
  TrackProjection project(Vec2 p) const;

  friend bool operator==(const Track&, const Track&) = default;
};

Track generate_track(const LevelParams& params);

struct Heightmap {
  Vec2 originXZ;
  double cellSize = 1.0;
  int rows = 0;  // along z
  int cols = 0;  // along x
  std::vector<float> heights;  // row-major

  float at(int row, int col) const { return heights[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col)]; }
  Vec2 node(int row, int col) const { return {originXZ.x + col * cellSize, originXZ.z + row * cellSize}; }
  bool contains(double x, double z) const;

  friend bool operator==(const Heightmap&, const Heightmap&) = default;
};

/// Height of the noise-free descending plane at (x, z).
double base_height(const LevelParams& params, Vec2 start, Vec2 p);

/// Seeded noise lattice values (row-major), uniform in [-A, A].
std::vector<double> noise_lattice(const LevelParams& params, int latticeRows, int latticeCols);

Heightmap generate_heightmap(const Track& track, const LevelParams& params);

/// Bilinear height; throws OutOfTerrain outside the grid.
double sample_height(const Heightmap& hm, double x, double z);
/// Height gradient (dh/dx, dh/dz) from the bilinear patch containing (x, z).
Vec2 sample_gradient(const Heightmap& hm, double x, double z);

struct Cube {
  Vec3 pos;
  double s = 0.0;
  bool collected = false;

  friend bool operator==(const Cube&, const Cube&) = default;
};

struct PropSet {
  std::vector<Vec3> poles;
  std::vector<Vec3> trees;
  std::vector<Cube> cubes;

  friend bool operator==(const PropSet&, const PropSet&) = default;
};

PropSet place_props(const Track& track, const Heightmap& hm, const LevelParams& params);

struct Level {
  LevelParams params;
  Track track;
  Heightmap heightmap;
  PropSet props;

  friend bool operator==(const Level&, const Level&) = default;
};

Level generate_level(const LevelParams& params);

/// Reflection of the whole level across the vertical plane x = start.x.
Level mirror_level(const Level& level);

}  // namespace skitrain
