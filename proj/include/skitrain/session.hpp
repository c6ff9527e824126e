#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skitrain/calibration.hpp"
#include "skitrain/io.hpp"
#include "skitrain/sim.hpp"

// Transport-independent session protocol. Every message is a JSON envelope
// {"type", "seq", "payload"}.

namespace skitrain {

inline constexpr std::string_view kProtocolVersion = "1";

enum class SessionPhase { Idle, Calibrating, Running, Paused, Finished };
std::string_view session_phase_name(SessionPhase p);

/// Read-only cache of generated preset levels shared across sessions.
class LevelCache {
 public:
  std::shared_ptr<const Level> get(int level, std::uint64_t seed);

 private:
  std::mutex mutex_;
  std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const Level>> levels_;
};

/// Preset summary served by GET /levels.
Json level_presets_json();

struct SessionConfig {
  SimParams sim;
  double tickHz = 50.0;         // simulation step rate; overrides sim.dt
  double stateHz = 25.0;        // STATE decimation
  double silenceTimeout = 5.0;  // s without client messages before auto-pause
  /// RunLogs are persisted here when non-empty.
  std::filesystem::path logDir;
  CalibrationOptions calibration;
};

class SessionEngine {
 public:
  explicit SessionEngine(SessionConfig config, std::shared_ptr<LevelCache> cache = nullptr, std::string sessionId = "session");

  /// Handles one client text frame received at `now` (seconds, monotonic).
  std::vector<std::string> handle(std::string_view text, double now);
  /// Advances the realtime clock. Steps the simulation when running.
  std::vector<std::string> tick(double now);

  SessionPhase phase() const { return phase_; }
  const std::optional<CalibrationProfile>& profile() const { return profile_; }
  const Simulation* simulation() const { return sim_ ? &*sim_ : nullptr; }
  std::size_t error_count() const { return errors_; }
  const std::filesystem::path& last_log_path() const { return lastLogPath_; }

 private:
  enum class Clock { Realtime, Lockstep };

  void emit(std::vector<std::string>& out, std::string_view type, Json payload);
  void error(std::vector<std::string>& out, std::string_view code, std::string message);

  void on_hello(std::vector<std::string>& out);
  void on_calibrate_window(std::vector<std::string>& out, const Json& payload);
  void on_head_pose(std::vector<std::string>& out, const Json& payload);
  void on_start_level(std::vector<std::string>& out, const Json& payload, double now);
  void on_pause(std::vector<std::string>& out, const Json& payload, double now);

  void finish_calibration(std::vector<std::string>& out);
  void step_once(std::vector<std::string>& out, const HeadPoseSample& pose);
  void complete_run(std::vector<std::string>& out);
  Json state_payload() const;

  SessionConfig config_;
  std::shared_ptr<LevelCache> cache_;
  std::string sessionId_;
  SessionPhase phase_ = SessionPhase::Idle;
  std::int64_t outSeq_ = 0;
  std::optional<std::int64_t> inSeq_;
  std::size_t errors_ = 0;
  double lastClientTime_ = 0.0;

  // Calibration
  std::vector<HeadPoseSample> calibrationPoses_;
  std::optional<CalibrationPhase> openWindow_;
  std::array<std::optional<TimeWindow>, kCalibrationPhases> windows_{};
  std::optional<CalibrationProfile> profile_;

  // Run
  std::shared_ptr<const Level> level_;
  int levelId_ = 0;
  bool avatar_ = true;
  Clock clock_ = Clock::Realtime;
  std::optional<Simulation> sim_;
  std::optional<HeadPoseSample> latestPose_;
  double runClockStart_ = 0.0;   // realtime origin, shifted by pauses
  double pausedAt_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t runCounter_ = 0;
  std::filesystem::path lastLogPath_;
};

}  // namespace skitrain
