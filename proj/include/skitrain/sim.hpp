#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skitrain/calibration.hpp"
#include "skitrain/motion.hpp"
#include "skitrain/terrain.hpp"

namespace skitrain {

struct SimParams {
  double dt = 0.02;
  double gravity = 9.81;
  double yawGain = 2.5;       // rad/s^2 per unit uLat
  double yawDamping = 1.5;    // 1/s
  double speedGain = 0.5;     // per unit uFore
  double frictionCoeff = 0.6;
  double uprightPenalty = 0.3;
  double maxSpeed = 12.0;
  double cubeRadius = 1.0;

  void validate() const;
  double rate() const { return 1.0 / dt; }

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct PlayerState {
  Vec2 posXZ;
  double heading = 0.0;  // 0 = downhill (-z)
  double speed = 0.0;
  double yawRate = 0.0;
  int score = 0;
  double t = 0.0;

  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

enum class EventKind { CUBE_COLLECTED, BOUNDARY_HIT, GOAL_REACHED };

std::string_view event_kind_name(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::BOUNDARY_HIT;
  int cube = -1;  // index for CUBE_COLLECTED

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

/// Player state at the start of a level.
PlayerState initial_state(const Level& level, double t0 = 0.0);

/// Advances one fixed step. Marks collected cubes in `props` and appends
/// any events. Throws OutOfTerrain if the player leaves the heightmap.
PlayerState step(const PlayerState& state, const ControlInput& input, const Level& level, PropSet& props,
                 const SimParams& params, std::vector<SimEvent>& events);

struct RunLog {
  std::uint64_t levelSeed = 0;
  int levelId = 0;  // preset id when known, 0 otherwise
  CalibrationProfile profile;
  SimParams params;
  PlayerState state0;
  std::vector<ControlInput> inputs;
  std::vector<PlayerState> states;
  std::vector<SimEvent> events;
  bool finished = false;
  double finishTime = 0.0;
  /// Set when the run terminated on an error such as OutOfTerrain.
  std::string failure;

  friend bool operator==(const RunLog&, const RunLog&) = default;
};

/// Step-by-step run that owns its mutable cube state. Used by both the
/// headless batch path and the live session service so their logs agree.
class Simulation {
 public:
  Simulation(const Level& level, const CalibrationProfile& profile, const SimParams& params, double t0 = 0.0);

  /// Normalizes `pose` and advances one step. Returns the events emitted by
  /// this step. No-op once the run is over.
  std::vector<SimEvent> advance(const HeadPoseSample& pose);
  std::vector<SimEvent> advance(const ControlInput& input);

  bool done() const { return log_.finished || !log_.failure.empty(); }
  const PlayerState& state() const { return state_; }
  const RunLog& log() const { return log_; }
  RunLog take_log() && { return std::move(log_); }
  const PropSet& props() const { return props_; }

 private:
  const Level* level_;
  SimParams params_;
  PropSet props_;
  PlayerState state_;
  RunLog log_;
};

/// Replays a head-pose trace: resamples it to the step grid, normalizes
/// each sample and steps until the goal, an error, or trace exhaustion.
RunLog run_headless(const Level& level, const CalibrationProfile& profile, std::span<const HeadPoseSample> headTrace,
                    const SimParams& params = {});

// ---------------------------------------------------------------------------
// Synthetic skier

struct SkierOptions {
  double aggressiveness = 1.0;  // 0..1, scales lateral lean
  double foreLean = 0.2;        // constant uFore
  double crouchFactor = 1.2;    // head height = yUpright - crouchFactor * stanceOffset
  double previewTime = 0.4;     // s of look-ahead for curvature
  double swayAmplitude = 0.01;  // m, lateral/fore postural sway
  double swayVertical = 0.002;  // m
  double tail = 1.0;            // s of trace kept after the goal
  double maxDuration = 300.0;   // s
  std::uint64_t seed = kDefaultSeed;
};

/// Head-pose trace of an ideal skier. Lateral lean is the curvature
/// feed-forward of the upcoming centerline plus a small tracking
/// correction, scaled into the calibrated range; fore lean is constant;
/// the head stays crouched. Sway is smooth seeded noise. The trace is
/// sampled on the simulation step grid so replay reproduces it exactly.
std::vector<HeadPoseSample> synthesize_skier_trace(const Level& level, const CalibrationProfile& profile,
                                                   const SkierOptions& options = {}, const SimParams& params = {});

}  // namespace skitrain
