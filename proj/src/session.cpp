#include "skitrain/session.hpp"

#include <cmath>

#include "skitrain/version.hpp"

namespace skitrain {

std::string_view session_phase_name(SessionPhase p) {
  switch (p) {
    case SessionPhase::Idle: return "idle";
    case SessionPhase::Calibrating: return "calibrating";
    case SessionPhase::Running: return "running";
    case SessionPhase::Paused: return "paused";
    case SessionPhase::Finished: return "finished";
  }
  return "idle";
}

std::shared_ptr<const Level> LevelCache::get(int level, std::uint64_t seed) {
  std::lock_guard lock(mutex_);
  auto& slot = levels_[{level, seed}];
  if (!slot) slot = std::make_shared<const Level>(generate_level(difficulty_preset(level, seed)));
  return slot;
}

Json level_presets_json() {
  Json levels = Json::array();
  for (int l = 1; l <= 3; ++l) {
    Json j = to_json(difficulty_preset(l));
    j["level"] = l;
    levels.push_back(j);
  }
  return {{"levels", levels}, {"generator", std::string(kVersionTag)}};
}

namespace {

Json level_description(const Level& level) {
  Json centerline = Json::array();
  const double length = level.track.length();
  const int n = static_cast<int>(std::ceil(length)) + 1;
  for (int i = 0; i < n; ++i) {
    const Vec2 p = level.track.point_at(std::min(static_cast<double>(i), length));
    centerline.push_back({p.x, p.z});
  }
  Json cubes = Json::array();
  for (const auto& c : level.props.cubes) cubes.push_back({c.pos.x, c.pos.z});
  return {{"centerline", centerline},
          {"halfWidth", level.params.corridorHalfWidth},
          {"goalArcLength", level.track.goalArcLength},
          {"cubes", cubes}};
}

std::optional<CalibrationPhase> parse_window(std::string_view s) {
  for (std::size_t i = 0; i < kCalibrationPhases; ++i)
    if (calibration_phase_name(static_cast<CalibrationPhase>(i)) == s) return static_cast<CalibrationPhase>(i);
  return std::nullopt;
}

Vec3 vec3_field(const Json& payload, const char* key, Vec3 fallback) {
  if (!payload.contains(key)) return fallback;
  const Json& v = payload.at(key);
  if (!v.is_array() || v.size() != 3) throw Error(ErrorKind::InvalidInput, std::string("'") + key + "' must be [x, y, z]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

}  // namespace

SessionEngine::SessionEngine(SessionConfig config, std::shared_ptr<LevelCache> cache, std::string sessionId)
    : config_(std::move(config)), cache_(cache ? std::move(cache) : std::make_shared<LevelCache>()), sessionId_(std::move(sessionId)) {
  if (!(config_.tickHz > 0.0) || !(config_.stateHz > 0.0)) throw Error(ErrorKind::InvalidParams, "tick and state rates must be > 0");
  config_.sim.dt = 1.0 / config_.tickHz;
  config_.sim.validate();
}

void SessionEngine::emit(std::vector<std::string>& out, std::string_view type, Json payload) {
  Json env = {{"type", std::string(type)}, {"seq", ++outSeq_}, {"payload", std::move(payload)}};
  out.push_back(env.dump());
}

void SessionEngine::error(std::vector<std::string>& out, std::string_view code, std::string message) {
  ++errors_;
  emit(out, "ERROR", {{"code", std::string(code)}, {"message", std::move(message)}});
}

std::vector<std::string> SessionEngine::handle(std::string_view text, double now) {
  std::vector<std::string> out;
  lastClientTime_ = now;
  Json msg;
  try {
    msg = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    error(out, "MalformedJson", e.what());
    return out;
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    error(out, "MalformedJson", "envelope needs a string 'type'");
    return out;
  }
  if (!msg.contains("seq") || !msg["seq"].is_number_integer()) {
    error(out, "MalformedJson", "envelope needs an integer 'seq'");
    return out;
  }
  const auto seq = msg["seq"].get<std::int64_t>();
  if (inSeq_ && seq <= *inSeq_) {
    error(out, "BadSeq", "seq " + std::to_string(seq) + " is not greater than " + std::to_string(*inSeq_));
    return out;
  }
  inSeq_ = seq;
  const std::string type = msg["type"].get<std::string>();
  const Json payload = msg.contains("payload") && !msg["payload"].is_null() ? msg["payload"] : Json::object();
  if (!payload.is_object()) {
    error(out, "MalformedJson", "payload must be an object");
    return out;
  }
  try {
    if (type == "HELLO") on_hello(out);
    else if (type == "CALIBRATE_WINDOW") on_calibrate_window(out, payload);
    else if (type == "HEAD_POSE") on_head_pose(out, payload);
    else if (type == "START_LEVEL") on_start_level(out, payload, now);
    else if (type == "PAUSE") on_pause(out, payload, now);
    else error(out, "UnknownType", "unknown message type '" + type + "'");
  } catch (const Error& e) {
    error(out, error_kind_name(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    error(out, "MalformedJson", e.what());
  }
  return out;
}

void SessionEngine::on_hello(std::vector<std::string>& out) {
  emit(out, "WELCOME",
       {{"protocol", std::string(kProtocolVersion)},
        {"levels", {1, 2, 3}},
        {"tickHz", config_.tickHz},
        {"server", std::string(kVersionTag)},
        {"phase", std::string(session_phase_name(phase_))},
        {"calibrated", profile_.has_value()}});
}

void SessionEngine::on_calibrate_window(std::vector<std::string>& out, const Json& payload) {
  if (phase_ != SessionPhase::Idle && phase_ != SessionPhase::Calibrating && phase_ != SessionPhase::Finished) {
    error(out, "PhaseViolation", "calibration is not allowed while " + std::string(session_phase_name(phase_)));
    return;
  }
  const std::string action = payload.value("action", "begin");
  if (action == "finish") {
    if (phase_ != SessionPhase::Calibrating) {
      error(out, "PhaseViolation", "no calibration in progress");
      return;
    }
    finish_calibration(out);
    return;
  }
  const auto window = parse_window(payload.value("window", ""));
  if (!window) {
    error(out, "InvalidInput", "window must be one of upright, left, right, front, back");
    return;
  }
  if (action == "begin") {
    if (phase_ != SessionPhase::Calibrating) {
      phase_ = SessionPhase::Calibrating;
      calibrationPoses_.clear();
      windows_ = {};
    }
    if (openWindow_) {
      error(out, "WindowOpen", std::string(calibration_phase_name(*openWindow_)) + " window is still open");
      return;
    }
    openWindow_ = window;
    windows_[static_cast<std::size_t>(*window)].reset();
  } else if (action == "end") {
    if (!openWindow_ || *openWindow_ != *window) {
      error(out, "WindowNotOpen", std::string(calibration_phase_name(*window)) + " window is not open");
      return;
    }
    openWindow_.reset();
    if (!windows_[static_cast<std::size_t>(*window)]) windows_[static_cast<std::size_t>(*window)] = TimeWindow{NAN, NAN};
    bool complete = true;
    for (const auto& w : windows_) complete = complete && w.has_value();
    if (complete) finish_calibration(out);
  } else {
    error(out, "InvalidInput", "action must be begin, end or finish");
  }
}

void SessionEngine::finish_calibration(std::vector<std::string>& out) {
  phase_ = SessionPhase::Idle;
  openWindow_.reset();
  CalibrationSchedule schedule;
  for (std::size_t i = 0; i < kCalibrationPhases; ++i) {
    const auto name = std::string(calibration_phase_name(static_cast<CalibrationPhase>(i)));
    const auto& w = windows_[i];
    std::size_t count = 0;
    if (w && !std::isnan(w->begin))
      for (const auto& p : calibrationPoses_) count += p.t >= w->begin && p.t <= w->end;
    if (count < config_.calibration.minSamplesPerWindow) {
      error(out, "InsufficientCalibrationData", name + " window has " + std::to_string(count) + " samples, need " +
                                                    std::to_string(config_.calibration.minSamplesPerWindow));
      return;
    }
    schedule.windows[i] = *w;
  }
  try {
    profile_ = run_calibration(calibrationPoses_, schedule, config_.calibration);
  } catch (const Error& e) {
    error(out, error_kind_name(e.kind()), e.what());
    return;
  }
  emit(out, "CALIBRATION_RESULT", {{"profile", to_json(*profile_)}});
}

void SessionEngine::on_head_pose(std::vector<std::string>& out, const Json& payload) {
  if (phase_ != SessionPhase::Calibrating && phase_ != SessionPhase::Running) {
    error(out, "PhaseViolation", "HEAD_POSE is not accepted while " + std::string(session_phase_name(phase_)));
    return;
  }
  HeadPoseSample pose;
  pose.t = payload.at("t").get<double>();
  pose.pos = vec3_field(payload, "pos", {});
  pose.orient = vec3_field(payload, "orient", {});
  if (!std::isfinite(pose.t) || !pose.pos.finite()) throw Error(ErrorKind::InvalidInput, "HEAD_POSE values must be finite");

  if (phase_ == SessionPhase::Calibrating) {
    if (!openWindow_) return;
    auto& w = windows_[static_cast<std::size_t>(*openWindow_)];
    if (!w || std::isnan(w->begin)) w = TimeWindow{pose.t, pose.t};
    w->begin = std::min(w->begin, pose.t);
    w->end = std::max(w->end, pose.t);
    calibrationPoses_.push_back(pose);
    return;
  }
  if (clock_ == Clock::Lockstep) step_once(out, pose);
  else latestPose_ = pose;
}

void SessionEngine::on_start_level(std::vector<std::string>& out, const Json& payload, double now) {
  if (phase_ != SessionPhase::Idle && phase_ != SessionPhase::Finished) {
    error(out, "PhaseViolation", "START_LEVEL is not allowed while " + std::string(session_phase_name(phase_)));
    return;
  }
  if (!profile_) {
    error(out, "NoProfile", "calibrate before starting a level");
    return;
  }
  const int level = payload.value("level", 1);
  const std::uint64_t seed = payload.value("seed", kDefaultSeed);
  const std::string clock = payload.value("clock", "realtime");
  if (clock != "realtime" && clock != "lockstep") {
    error(out, "InvalidInput", "clock must be realtime or lockstep");
    return;
  }
  level_ = cache_->get(level, seed);
  levelId_ = level;
  avatar_ = payload.value("avatar", true);
  clock_ = clock == "lockstep" ? Clock::Lockstep : Clock::Realtime;
  sim_.emplace(*level_, *profile_, config_.sim, 0.0);
  latestPose_.reset();
  steps_ = 0;
  runClockStart_ = now;
  phase_ = SessionPhase::Running;
  Json state = state_payload();
  state["level"] = level_description(*level_);
  state["levelId"] = levelId_;
  state["seed"] = seed;
  state["avatar"] = avatar_;
  state["clock"] = clock;
  emit(out, "STATE", std::move(state));
}

void SessionEngine::on_pause(std::vector<std::string>& out, const Json& payload, double now) {
  const bool paused = payload.value("paused", true);
  if (paused && phase_ == SessionPhase::Running) {
    phase_ = SessionPhase::Paused;
    pausedAt_ = now;
  } else if (!paused && phase_ == SessionPhase::Paused) {
    phase_ = SessionPhase::Running;
    runClockStart_ += now - pausedAt_;
  } else if (!(paused && phase_ == SessionPhase::Paused) && !(!paused && phase_ == SessionPhase::Running)) {
    error(out, "PhaseViolation", "PAUSE is not applicable while " + std::string(session_phase_name(phase_)));
    return;
  }
  emit(out, "STATE", state_payload());
}

std::vector<std::string> SessionEngine::tick(double now) {
  std::vector<std::string> out;
  if (phase_ == SessionPhase::Running && now - lastClientTime_ > config_.silenceTimeout) {
    phase_ = SessionPhase::Paused;
    pausedAt_ = now;
    emit(out, "EVENT", {{"kind", "AUTO_PAUSE"}, {"t", sim_->state().t}});
    emit(out, "STATE", state_payload());
    return out;
  }
  if (phase_ != SessionPhase::Running || clock_ != Clock::Realtime) return out;
  const auto target = static_cast<std::size_t>(std::floor((now - runClockStart_) / config_.sim.dt));
  // Bounded catch-up keeps a stalled connection from bursting.
  constexpr std::size_t kMaxCatchUp = 10;
  std::size_t budget = kMaxCatchUp;
  while (steps_ < target && phase_ == SessionPhase::Running && budget-- > 0) {
    HeadPoseSample pose;
    if (latestPose_) {
      pose = *latestPose_;
    } else {
      pose.pos = {profile_->xCenter, profile_->yUpright, profile_->zCenter};
    }
    step_once(out, pose);
  }
  if (steps_ < target && phase_ == SessionPhase::Running) runClockStart_ = now - static_cast<double>(steps_) * config_.sim.dt;
  return out;
}

void SessionEngine::step_once(std::vector<std::string>& out, const HeadPoseSample& pose) {
  const auto events = sim_->advance(pose);
  ++steps_;
  for (const auto& e : events) emit(out, "EVENT", to_json(e));
  const auto decimation = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(1.0 / (config_.sim.dt * config_.stateHz))));
  if (sim_->done()) {
    complete_run(out);
  } else if (steps_ % decimation == 0) {
    emit(out, "STATE", state_payload());
  }
}

void SessionEngine::complete_run(std::vector<std::string>& out) {
  phase_ = SessionPhase::Finished;
  RunLog log = sim_->log();
  log.levelId = levelId_;
  std::string path;
  if (!config_.logDir.empty()) {
    ++runCounter_;
    lastLogPath_ = config_.logDir / (sessionId_ + "-run" + std::to_string(runCounter_) + ".jsonl");
    write_file_atomic(lastLogPath_, serialize_run_log(log));
    path = lastLogPath_.string();
  }
  emit(out, "STATE", state_payload());
  Json payload = {{"finished", log.finished},
                  {"finishTime", log.finishTime},
                  {"score", sim_->state().score},
                  {"cubes", level_->props.cubes.size()},
                  {"steps", log.states.size()},
                  {"log", path}};
  if (!log.failure.empty()) payload["failure"] = log.failure;
  emit(out, "RUN_COMPLETE", std::move(payload));
}

Json SessionEngine::state_payload() const {
  Json j = {{"phase", std::string(session_phase_name(phase_))}};
  if (sim_) {
    const PlayerState& s = sim_->state();
    j["t"] = s.t;
    j["pos"] = {s.posXZ.x, s.posXZ.z};
    j["heading"] = s.heading;
    j["speed"] = s.speed;
    j["yawRate"] = s.yawRate;
    j["score"] = s.score;
  }
  return j;
}

}  // namespace skitrain
