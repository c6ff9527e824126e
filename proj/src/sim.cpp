#include "skitrain/sim.hpp"

#include <algorithm>

#include "skitrain/rng.hpp"

namespace skitrain {

void SimParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParams, what); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be > 0");
  if (!(uprightPenalty > 0.0 && uprightPenalty <= 1.0)) fail("uprightPenalty must be in (0, 1]");
  if (!(maxSpeed > 0.0)) fail("maxSpeed must be > 0");
  if (!(gravity >= 0.0) || !(yawDamping >= 0.0) || !(frictionCoeff >= 0.0) || !(cubeRadius >= 0.0))
    fail("gravity, yawDamping, frictionCoeff and cubeRadius must be >= 0");
  if (!std::isfinite(yawGain) || !std::isfinite(speedGain)) fail("gains must be finite");
}

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::CUBE_COLLECTED: return "CUBE_COLLECTED";
    case EventKind::BOUNDARY_HIT: return "BOUNDARY_HIT";
    case EventKind::GOAL_REACHED: return "GOAL_REACHED";
  }
  return "BOUNDARY_HIT";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (EventKind k : {EventKind::CUBE_COLLECTED, EventKind::BOUNDARY_HIT, EventKind::GOAL_REACHED})
    if (event_kind_name(k) == s) return k;
  return std::nullopt;
}

PlayerState initial_state(const Level& level, double t0) {
  PlayerState s;
  s.posXZ = level.track.start;
  s.heading = level.track.heading_at(0.0);
  s.t = t0;
  return s;
}

namespace {

double segment_distance(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  const double w = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + ab * w)).norm();
}

}  // namespace

PlayerState step(const PlayerState& state, const ControlInput& input, const Level& level, PropSet& props,
                 const SimParams& params, std::vector<SimEvent>& events) {
  const double dt = params.dt;
  const double penalty = input.upright ? params.uprightPenalty : 1.0;
  PlayerState next = state;
  next.t = state.t + dt;

  next.yawRate = state.yawRate + (params.yawGain * input.uLat * penalty - params.yawDamping * state.yawRate) * dt;
  next.heading = wrap_angle(state.heading + next.yawRate * dt);

  // Gravity along the travel direction: g sin(slope) cos(heading - fall line).
  const Vec2 grad = sample_gradient(level.heightmap, state.posXZ.x, state.posXZ.z);
  const Vec2 dir = heading_direction(next.heading);
  const double downhillComponent = -(dir.dot(grad)) / std::sqrt(1.0 + grad.dot(grad));
  const double accel = params.gravity * downhillComponent - params.frictionCoeff * params.gravity * state.speed / params.maxSpeed;
  const double uprightDecay = input.upright ? 1.0 - (1.0 - params.uprightPenalty) * dt : 1.0;
  next.speed = std::clamp((state.speed + accel * dt) * (1.0 + params.speedGain * input.uFore * penalty * dt) * uprightDecay,
                          0.0, params.maxSpeed);

  next.posXZ = state.posXZ + dir * (next.speed * dt);

  const Track& track = level.track;
  TrackProjection proj = track.project(next.posXZ);
  const double halfWidth = level.params.corridorHalfWidth;
  if (std::abs(proj.lateral) > halfWidth) {
    next.posXZ = proj.point + right_normal(proj.heading) * (proj.lateral > 0.0 ? halfWidth : -halfWidth);
    next.speed *= 0.5;
    events.push_back({next.t, EventKind::BOUNDARY_HIT, -1});
  }
  // Surface lookup doubles as the terrain bounds check.
  (void)sample_height(level.heightmap, next.posXZ.x, next.posXZ.z);

  for (std::size_t i = 0; i < props.cubes.size(); ++i) {
    Cube& cube = props.cubes[i];
    if (cube.collected) continue;
    if (segment_distance(state.posXZ, next.posXZ, {cube.pos.x, cube.pos.z}) <= params.cubeRadius) {
      cube.collected = true;
      ++next.score;
      events.push_back({next.t, EventKind::CUBE_COLLECTED, static_cast<int>(i)});
    }
  }

  if (track.project(next.posXZ).s >= track.goalArcLength) events.push_back({next.t, EventKind::GOAL_REACHED, -1});
  return next;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const Level& level, const CalibrationProfile& profile, const SimParams& params, double t0)
    : level_(&level), params_(params), props_(level.props), state_(initial_state(level, t0)) {
  params_.validate();
  profile.validate();
  for (auto& c : props_.cubes) c.collected = false;
  log_.levelSeed = level.params.seed;
  log_.profile = profile;
  log_.params = params_;
  log_.state0 = state_;
}

std::vector<SimEvent> Simulation::advance(const HeadPoseSample& pose) {
  return advance(normalize_input(pose, log_.profile));
}

std::vector<SimEvent> Simulation::advance(const ControlInput& input) {
  std::vector<SimEvent> events;
  if (done()) return events;
  try {
    state_ = step(state_, input, *level_, props_, params_, events);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutOfTerrain) throw;
    log_.failure = e.what();
    return events;
  }
  log_.inputs.push_back(input);
  log_.states.push_back(state_);
  for (const auto& e : events) {
    log_.events.push_back(e);
    if (e.kind == EventKind::GOAL_REACHED) {
      log_.finished = true;
      log_.finishTime = e.t;
    }
  }
  return events;
}

RunLog run_headless(const Level& level, const CalibrationProfile& profile, std::span<const HeadPoseSample> headTrace,
                    const SimParams& params) {
  params.validate();
  if (headTrace.empty()) throw Error(ErrorKind::EmptySeries, "head trace is empty");
  const std::vector<HeadPoseSample> grid = resample_head(headTrace, params.rate());
  Simulation sim(level, profile, params, grid.front().t);
  for (const auto& pose : grid) {
    sim.advance(pose);
    if (sim.done()) break;
  }
  return std::move(sim).take_log();
}

// ---------------------------------------------------------------------------

namespace {

/// Smooth bounded sway: three low-frequency sinusoids whose amplitudes sum
/// to `amplitude`.
class Sway {
 public:
  Sway(SplitMix64& rng, double amplitude) {
    double total = 0.0;
    for (auto& c : comps_) {
      c.freq = rng.uniform(0.05, 0.3);
      c.phase = rng.uniform(0.0, 2.0 * kPi);
      c.weight = rng.uniform(0.5, 1.0);
      total += c.weight;
    }
    for (auto& c : comps_) c.weight *= amplitude / total;
  }

  double operator()(double t) const {
    double v = 0.0;
    for (const auto& c : comps_) v += c.weight * std::sin(2.0 * kPi * c.freq * t + c.phase);
    return v;
  }

 private:
  struct Component {
    double freq = 0.0, phase = 0.0, weight = 0.0;
  };
  std::array<Component, 3> comps_{};
};

}  // namespace

std::vector<HeadPoseSample> synthesize_skier_trace(const Level& level, const CalibrationProfile& profile,
                                                   const SkierOptions& options, const SimParams& params) {
  params.validate();
  profile.validate();
  const double aggr = std::clamp(options.aggressiveness, 0.0, 1.0);
  SplitMix64 rng(options.seed, "skier-sway");
  const Sway swayX(rng, options.swayAmplitude);
  const Sway swayZ(rng, options.swayAmplitude);
  const Sway swayY(rng, std::min(options.swayVertical, 0.1 * profile.stanceOffset));

  const double rate = params.rate();
  const double foreOffset = denormalize_fore(std::clamp(options.foreLean, -1.0, 1.0), profile);
  const double headY = profile.yUpright - options.crouchFactor * profile.stanceOffset;

  // Tracking gains of the corrective part of the lean.
  constexpr double kLateralGain = 0.3;   // rad of heading correction per m of offset
  constexpr double kHeadingGain = 1.5;   // 1/s
  constexpr double kYawRateGain = 4.0;   // 1/s

  Simulation sim(level, profile, params, 0.0);
  const Track& track = level.track;
  std::vector<HeadPoseSample> trace;
  std::size_t tailSteps = 0;
  const auto maxSteps = static_cast<std::size_t>(std::ceil(options.maxDuration * rate));
  const auto tailLimit = static_cast<std::size_t>(std::ceil(options.tail * rate));
  for (std::size_t k = 0; k < maxSteps; ++k) {
    const PlayerState& st = sim.state();
    const TrackProjection proj = track.project(st.posXZ);
    const double v = std::max(st.speed, 0.5);
    const double curvature = track.curvature_at(proj.s + v * options.previewTime);
    const double yawFeedForward = v * curvature;
    const double headingTarget = proj.heading - std::atan(kLateralGain * proj.lateral);
    const double yawTarget = yawFeedForward + kHeadingGain * wrap_angle(headingTarget - st.heading);
    const double lean = (params.yawDamping * yawTarget + kYawRateGain * (yawTarget - st.yawRate)) / params.yawGain;
    const double uLat = std::clamp(aggr * lean, -1.0, 1.0);

    HeadPoseSample pose;
    pose.t = uniform_time(0.0, rate, k);
    pose.pos = {profile.xCenter + denormalize_lateral(uLat, profile) + swayX(pose.t), headY + swayY(pose.t),
                profile.zCenter - foreOffset + swayZ(pose.t)};
    trace.push_back(pose);

    if (sim.done()) {
      if (++tailSteps >= tailLimit) break;
      continue;
    }
    sim.advance(pose);
  }
  return trace;
}

}  // namespace skitrain
