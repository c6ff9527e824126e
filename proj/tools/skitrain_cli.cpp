#include <cctype>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skitrain/io.hpp"
#include "skitrain/pipeline.hpp"
#include "skitrain/server.hpp"
#include "skitrain/version.hpp"

namespace fs = std::filesystem;
using namespace skitrain;

namespace {

bool is_usage_error(ErrorKind k) {
  return k == ErrorKind::UnknownLevel || k == ErrorKind::InvalidParams || k == ErrorKind::InvalidInput;
}

int report_error(std::string_view module, const Error& e) {
  std::cerr << "skitrain [" << module << "] " << e.what() << "\n";
  return is_usage_error(e.kind()) ? 2 : 1;
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

CalibrationProfile load_profile(const fs::path& path) {
  try {
    return profile_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

SimParams load_sim_params(const std::string& path) {
  if (path.empty()) return {};
  SimParams p = sim_params_from_json(read_json(path));
  p.validate();
  return p;
}

Confidence confidence_flag(const std::string& s) {
  std::string lower = s;
  for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  const auto c = parse_confidence(lower);
  if (!c) throw Error(ErrorKind::InvalidInput, "unknown confidence '" + s + "' (high, medium, low, none)");
  return *c;
}

std::string json_text(const Json& j) { return j.dump(1) + "\n"; }

struct LevelSource {
  int level = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string file;
  CLI::Option* levelOption = nullptr;

  void add(CLI::App* cmd) {
    levelOption = cmd->add_option("--level", level, "Difficulty preset 1, 2 or 3 (with --level-file: level id recorded in the log)");
    cmd->add_option("--seed", seed, "Level seed")->capture_default_str();
    cmd->add_option("--level-file", file, "Level JSON written by gen-level (overrides --level)")->check(CLI::ExistingFile);
  }
  Level load() const { return file.empty() ? generate_level(difficulty_preset(level, seed)) : load_level(file); }
  int id() const { return file.empty() || levelOption->count() > 0 ? level : 0; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balance-training ski simulator: level generation, calibration, simulation and motion analysis"};
  app.set_version_flag("--version", std::string(kVersionTag));
  app.require_subcommand(1);

  // gen-level
  auto* genLevel = app.add_subcommand("gen-level", "Generate a difficulty-preset level");
  int glLevel = 1;
  std::uint64_t glSeed = kDefaultSeed;
  std::string glOut, glPgm;
  genLevel->add_option("--level", glLevel, "Difficulty preset 1, 2 or 3")->required();
  genLevel->add_option("--seed", glSeed, "Level seed")->capture_default_str();
  genLevel->add_option("--out", glOut, "Output level JSON (default level<L>-<seed>.json)");
  genLevel->add_option("--pgm", glPgm, "Also write the heightmap as a PGM image");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Compute a calibration profile from a head trace and prompt schedule");
  std::string calTrace, calSchedule, calOut = "profile.json";
  CalibrationOptions calOptions;
  calibrate->add_option("--trace", calTrace, "Head trace CSV recorded during the prompts")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--schedule", calSchedule, "Prompt schedule JSON")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--out", calOut, "Output profile JSON")->capture_default_str();
  calibrate->add_option("--stance-fraction", calOptions.stanceFraction, "Crouch threshold as a fraction of the front lean drop")
      ->capture_default_str();
  calibrate->add_option("--min-samples", calOptions.minSamplesPerWindow, "Minimum samples per prompt window")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Replay a head trace through the simulation");
  LevelSource simLevel;
  simLevel.add(simulate);
  std::string simProfile, simTrace, simOut = "run.jsonl", simParams;
  simulate->add_option("--profile", simProfile, "Calibration profile JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--trace", simTrace, "Head trace CSV")->required()->check(CLI::ExistingFile);
  simulate->add_option("--params", simParams, "SimParams JSON")->check(CLI::ExistingFile);
  simulate->add_option("--out", simOut, "Output RunLog JSONL")->capture_default_str();

  // synth-trace
  auto* synth = app.add_subcommand("synth-trace", "Synthesize an ideal-skier head trace for a level");
  LevelSource synLevel;
  synLevel.add(synth);
  std::string synProfile, synOut = "head.csv", synParams;
  SkierOptions skier;
  skier.seed = kDefaultSeed;
  synth->add_option("--profile", synProfile, "Calibration profile JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--params", synParams, "SimParams JSON")->check(CLI::ExistingFile);
  synth->add_option("--out", synOut, "Output head trace CSV")->capture_default_str();
  synth->add_option("--trace-seed", skier.seed, "Seed of the postural sway")->capture_default_str();
  synth->add_option("--aggressiveness", skier.aggressiveness, "Steering gain")->capture_default_str();
  synth->add_option("--fore-lean", skier.foreLean, "Forward lean input while gliding")->capture_default_str();
  synth->add_option("--sway", skier.swayAmplitude, "Horizontal sway amplitude (m)")->capture_default_str();

  // angles
  auto* angles = app.add_subcommand("angles", "Extract body angles from skeleton streams");
  std::vector<std::string> angSkeletons;
  std::string angOut = "angles.csv", angMinConf = "medium";
  double angUprightEnd = 0.0;
  angles->add_option("--skeleton", angSkeletons, "Skeleton JSONL per camera (one or two)")
      ->required()
      ->check(CLI::ExistingFile)
      ->expected(1, 2);
  angles->add_option("--out", angOut, "Output angle CSV")->capture_default_str();
  angles->add_option("--min-conf", angMinConf, "Minimum joint confidence")->capture_default_str();
  angles->add_option("--upright-end", angUprightEnd, "Frames before this time form the upright reference")->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Correlate one run's head trace with its body angles");
  std::string anHead, anAngles, anProfile, anOut = "analysis";
  int anLevel = 1;
  bool anAvatar = true;
  double anRate = 25.0;
  analyze->add_option("--head", anHead, "Head trace CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--angles", anAngles, "Angle CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--profile", anProfile, "Calibration profile JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--level", anLevel, "Level of the run")->capture_default_str();
  analyze->add_option("--avatar", anAvatar, "Avatar condition of the run")->capture_default_str();
  analyze->add_option("--rate", anRate, "Resample rate (Hz)")->capture_default_str();
  analyze->add_option("--out", anOut, "Output directory for the report files")->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "Rebuild the report from a pipeline output directory");
  std::string repInput, repOut;
  double repRate = 25.0;
  report->add_option("--input", repInput, "Pipeline output directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", repOut, "Output directory (default: the input directory)");
  report->add_option("--rate", repRate, "Resample rate (Hz)")->capture_default_str();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run the end-to-end experiment");
  PipelineOptions pipeOptions;
  std::optional<int> pipeSynthetic;
  std::string pipeProfile, pipeManifest, pipeOut = "pipeline-out", pipeMinConf = "medium", pipeParams;
  bool pipeSkeletons = false, pipeSingleAvatar = false;
  pipeline->add_option("--synthetic", pipeSynthetic, "Number of synthetic subjects");
  pipeline->add_option("--seed", pipeOptions.seed, "Cohort seed")->capture_default_str();
  pipeline->add_option("--levels", pipeOptions.levels, "Levels to play")->delimiter(',')->capture_default_str();
  pipeline->add_option("--profile", pipeProfile, "Calibration profile JSON for recorded runs")->check(CLI::ExistingFile);
  pipeline->add_option("--manifest", pipeManifest, "Recorded run manifest JSON")->check(CLI::ExistingFile);
  pipeline->add_option("--params", pipeParams, "SimParams JSON")->check(CLI::ExistingFile);
  pipeline->add_option("--rate", pipeOptions.analysisRate, "Analysis resample rate (Hz)")->capture_default_str();
  pipeline->add_option("--min-conf", pipeMinConf, "Minimum joint confidence")->capture_default_str();
  pipeline->add_flag("--skeletons", pipeSkeletons, "Also write per-camera skeleton JSONL files");
  pipeline->add_flag("--single-avatar", pipeSingleAvatar, "Play each level once (avatar on) instead of both conditions");
  pipeline->add_option("--out", pipeOut, "Output directory")->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the realtime session server");
  ServerOptions serverOptions;
  serverOptions.session.logDir = "runs";
  std::string serveLogDir = "runs";
  serve->add_option("--bind", serverOptions.bind, "host:port to listen on")->capture_default_str();
  serve->add_option("--tick-hz", serverOptions.session.tickHz, "Simulation tick rate (Hz)")->capture_default_str();
  serve->add_option("--log-dir", serveLogDir, "Directory for persisted RunLogs")->capture_default_str();
  serve->add_option("--threads", serverOptions.threads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*genLevel) {
      try {
        const Level level = generate_level(difficulty_preset(glLevel, glSeed));
        const std::string out = glOut.empty() ? "level" + std::to_string(glLevel) + "-" + std::to_string(glSeed) + ".json" : glOut;
        write_file_atomic(out, serialize_level(level));
        if (!glPgm.empty()) write_file_atomic(glPgm, heightmap_to_pgm(level.heightmap));
        std::cout << out << "\n";
      } catch (const Error& e) {
        return report_error("terrain-gen", e);
      }
    } else if (*calibrate) {
      try {
        const auto trace = head_trace_from_csv(read_text_file(calTrace));
        CalibrationSchedule schedule;
        try {
          schedule = schedule_from_json(read_json(calSchedule));
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorKind::ParseError, calSchedule + ": " + e.what());
        }
        const CalibrationProfile profile = run_calibration(trace, schedule, calOptions);
        write_file_atomic(calOut, json_text(to_json(profile)));
        std::cout << calOut << "\n";
      } catch (const Error& e) {
        return report_error("calibration", e);
      }
    } else if (*simulate) {
      try {
        const Level level = simLevel.load();
        const CalibrationProfile profile = load_profile(simProfile);
        const auto trace = head_trace_from_csv(read_text_file(simTrace));
        RunLog log = run_headless(level, profile, trace, load_sim_params(simParams));
        log.levelId = simLevel.id();
        write_file_atomic(simOut, serialize_run_log(log));
        const int score = log.states.empty() ? 0 : log.states.back().score;
        std::cout << "finished=" << (log.finished ? "true" : "false") << " time=" << format_double(log.finishTime)
                  << " score=" << score << "/" << level.props.cubes.size();
        if (!log.failure.empty()) std::cout << " failure=" << log.failure;
        std::cout << "\n";
      } catch (const Error& e) {
        return report_error("ski-sim", e);
      }
    } else if (*synth) {
      try {
        const Level level = synLevel.load();
        const CalibrationProfile profile = load_profile(synProfile);
        const auto trace = synthesize_skier_trace(level, profile, skier, load_sim_params(synParams));
        write_file_atomic(synOut, head_trace_to_csv(trace));
        std::cout << synOut << "\n";
      } catch (const Error& e) {
        return report_error("ski-sim", e);
      }
    } else if (*angles) {
      try {
        std::vector<std::vector<SkeletonFrame>> streams;
        for (const auto& p : angSkeletons) streams.push_back(skeleton_from_jsonl(read_text_file(p)));
        const AngleSeries series = extract_angles(streams, confidence_flag(angMinConf), angUprightEnd);
        write_file_atomic(angOut, angle_series_to_csv(series));
        std::cout << angOut << "\n";
      } catch (const Error& e) {
        return report_error("body-angles", e);
      }
    } else if (*analyze) {
      try {
        RunAnalysisInput run;
        run.id = fs::path(anHead).stem().string();
        run.level = anLevel;
        run.avatar = anAvatar;
        run.profile = load_profile(anProfile);
        run.head = head_trace_from_csv(read_text_file(anHead));
        run.angles = angle_series_from_csv(read_text_file(anAngles));
        const AnalysisReport rep = analyze_runs(std::span<const RunAnalysisInput>(&run, 1), anRate);
        write_report_files(rep, anOut);
        std::cout << (fs::path(anOut) / "report.md").string() << "\n";
      } catch (const Error& e) {
        return report_error("stats-report", e);
      }
    } else if (*report) {
      try {
        const AnalysisReport rep = analyze_output_dir(repInput, repRate);
        const fs::path out = repOut.empty() ? fs::path(repInput) : fs::path(repOut);
        write_report_files(rep, out);
        std::cout << (out / "report.md").string() << "\n";
      } catch (const Error& e) {
        return report_error("stats-report", e);
      }
    } else if (*pipeline) {
      const bool recorded = !pipeManifest.empty() || !pipeProfile.empty();
      if (pipeSynthetic && recorded) {
        std::cerr << "skitrain [cli] --synthetic cannot be combined with --profile/--manifest\n";
        return 2;
      }
      if (!pipeSynthetic && (pipeManifest.empty() || pipeProfile.empty())) {
        std::cerr << "skitrain [cli] pipeline needs --synthetic N or both --profile and --manifest\n";
        return 2;
      }
      try {
        pipeOptions.minConf = confidence_flag(pipeMinConf);
        pipeOptions.bothAvatarConditions = !pipeSingleAvatar;
        pipeOptions.sim = load_sim_params(pipeParams);
        PipelineResult result;
        if (pipeSynthetic) {
          pipeOptions.subjects = *pipeSynthetic;
          result = run_synthetic_pipeline(pipeOptions);
        } else {
          const CalibrationProfile profile = load_profile(pipeProfile);
          const auto specs = load_run_manifest(pipeManifest);
          result = run_recorded_pipeline(profile, specs, pipeOptions);
        }
        OutputOptions output;
        output.skeletons = pipeSkeletons;
        write_pipeline_outputs(result, pipeOut, output);
        std::size_t finished = 0;
        for (const auto& r : result.runs) finished += r.log.finished;
        std::cout << "runs=" << result.runs.size() << " finished=" << finished << " report="
                  << (fs::path(pipeOut) / "report.md").string() << "\n";
      } catch (const Error& e) {
        return report_error("pipeline", e);
      }
    } else if (*serve) {
      try {
        serverOptions.session.logDir = serveLogDir;
        Server server(serverOptions);
        std::cout << "listening on port " << server.port() << std::endl;
        server.run();
      } catch (const Error& e) {
        return report_error("sim-service", e);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "skitrain [cli] " << e.what() << "\n";
    return 1;
  }
  return 0;
}
