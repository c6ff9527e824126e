#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skitrain/calibration.hpp"
#include "skitrain/motion.hpp"
#include "skitrain/sim.hpp"
#include "skitrain/terrain.hpp"

namespace skitrain {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a sibling temp file and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// JSON mappings. Readers throw ParseError on missing or mistyped fields.

Json to_json(const LevelParams& p);
LevelParams level_params_from_json(const Json& j);
Json to_json(const Track& t);
Track track_from_json(const Json& j);
Json to_json(const Heightmap& hm);
Heightmap heightmap_from_json(const Json& j);
Json to_json(const PropSet& props);
PropSet props_from_json(const Json& j);

Json to_json(const CalibrationProfile& p);
CalibrationProfile profile_from_json(const Json& j);
Json to_json(const CalibrationSchedule& s);
CalibrationSchedule schedule_from_json(const Json& j);

Json to_json(const SimParams& p);
SimParams sim_params_from_json(const Json& j);
Json to_json(const ControlInput& in);
ControlInput control_input_from_json(const Json& j);
Json to_json(const PlayerState& s);
PlayerState player_state_from_json(const Json& j);
Json to_json(const SimEvent& e);
SimEvent sim_event_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Level file: {"v":1, "generator", params, track, heightmap, props}

inline constexpr int kLevelFormatVersion = 1;

std::string serialize_level(const Level& level);
Level parse_level(std::string_view text);
Level load_level(const std::filesystem::path& path);

/// Binary PGM (P5) with heights scaled to 0..255.
std::string heightmap_to_pgm(const Heightmap& hm);

// ---------------------------------------------------------------------------
// Head-pose CSV: t,x,y,z,rx,ry,rz

std::string head_trace_to_csv(std::span<const HeadPoseSample> samples);
std::vector<HeadPoseSample> head_trace_from_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Skeleton JSON Lines, one frame per line.

Json to_json(const SkeletonFrame& frame);
SkeletonFrame skeleton_frame_from_json(const Json& j);
std::string skeleton_to_jsonl(std::span<const SkeletonFrame> frames);
std::vector<SkeletonFrame> skeleton_from_jsonl(std::string_view text);

// ---------------------------------------------------------------------------
// RunLog JSON Lines: header, one line per step, events, outcome.

std::string serialize_run_log(const RunLog& log);
RunLog parse_run_log(std::string_view text);

}  // namespace skitrain
