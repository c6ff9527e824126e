#include "skitrain/pipeline.hpp"

#include <cstdio>

#include "skitrain/io.hpp"
#include "skitrain/rng.hpp"
#include "skitrain/version.hpp"

namespace skitrain {

namespace fs = std::filesystem;

AngleSeries extract_angles(std::span<const std::vector<SkeletonFrame>> streams, Confidence minConf, double uprightEnd) {
  const CameraAssignment assignment = select_cameras(streams);
  const std::vector<SkeletonFrame> fused = fuse_streams(streams, assignment);
  std::vector<SkeletonFrame> upright, active;
  for (const auto& f : fused) (f.t < uprightEnd ? upright : active).push_back(f);
  const ReferenceFrame ref = estimate_reference_frame(upright);
  return compute_angle_series(active, ref, minConf);
}

std::uint64_t subject_level_seed(std::uint64_t seed, int subject, int level) {
  SplitMix64 rng(seed, "level", static_cast<std::uint64_t>(subject) * 16 + static_cast<std::uint64_t>(level));
  return rng.next();
}

namespace {

std::string run_id(int subject, int level, bool avatar) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "s%02d_L%d_%s", subject, level, avatar ? "w" : "wo");
  return buf;
}

RunAnalysisInput analysis_input(const PipelineRun& run) {
  return {run.id, run.subject, run.level, run.avatar, run.profile, run.head, run.angles};
}

AnalysisReport analyze(const std::vector<PipelineRun>& runs, double rate) {
  std::vector<RunAnalysisInput> inputs;
  inputs.reserve(runs.size());
  for (const auto& r : runs) inputs.push_back(analysis_input(r));
  return analyze_runs(inputs, rate);
}

}  // namespace

PipelineResult run_synthetic_pipeline(const PipelineOptions& options) {
  if (options.subjects < 1) throw Error(ErrorKind::InvalidInput, "at least one synthetic subject is required");
  if (options.levels.empty()) throw Error(ErrorKind::InvalidInput, "at least one level is required");
  PipelineResult result;
  for (int i = 0; i < options.subjects; ++i) {
    PipelineSubject subject;
    subject.index = i;
    subject.params = random_subject(options.seed, i);
    subject.calibration = synthesize_calibration(subject.params, mix64(options.seed ^ tag_hash("calibration")) + static_cast<std::uint64_t>(i));
    subject.profile = run_calibration(subject.calibration.head, subject.calibration.schedule);

    SplitMix64 style(options.seed, "style", static_cast<std::uint64_t>(i));
    SkierOptions skier;
    skier.swayAmplitude = style.uniform(0.01, 0.02);
    skier.foreLean = style.uniform(0.1, 0.3);

    for (int level : options.levels) {
      const Level levelData = generate_level(difficulty_preset(level, subject_level_seed(options.seed, i, level)));
      for (const bool avatar : {true, false}) {
        if (!avatar && !options.bothAvatarConditions) continue;
        PipelineRun run;
        run.id = run_id(i, level, avatar);
        run.subject = i;
        run.level = level;
        run.avatar = avatar;
        run.levelData = levelData;
        run.profile = subject.profile;
        const std::uint64_t runSeed = mix64(options.seed ^ tag_hash(run.id));
        skier.seed = runSeed;
        const auto trace = synthesize_skier_trace(levelData, subject.profile, skier, options.sim);
        SubjectRecording rec = record_subject(subject.params, trace, runSeed);
        run.head = std::move(rec.head);
        run.log = run_headless(levelData, subject.profile, run.head, options.sim);
        run.log.levelId = level;
        run.cameras = std::move(rec.cameras);
        run.angles = extract_angles(run.cameras, options.minConf);
        result.runs.push_back(std::move(run));
      }
    }
    result.subjects.push_back(std::move(subject));
  }
  result.report = analyze(result.runs, options.analysisRate);
  return result;
}

std::vector<RecordedRunSpec> load_run_manifest(const fs::path& manifest) {
  const std::string text = read_text_file(manifest);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "run manifest: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("runs") || !j["runs"].is_array())
    throw Error(ErrorKind::ParseError, "run manifest needs a 'runs' array");
  const fs::path base = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  std::vector<RecordedRunSpec> specs;
  try {
    for (const auto& r : j["runs"]) {
      RecordedRunSpec s;
      s.level = r.at("level").get<int>();
      s.id = r.value("id", "run" + std::to_string(specs.size()));
      s.levelSeed = r.value("seed", kDefaultSeed);
      s.avatar = r.value("avatar", true);
      s.trace = resolve(r.at("trace").get<std::string>());
      if (r.contains("skeletons"))
        for (const auto& p : r["skeletons"]) s.skeletons.push_back(resolve(p.get<std::string>()));
      specs.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, "run manifest: " + std::string(e.what()));
  }
  return specs;
}

PipelineResult run_recorded_pipeline(const CalibrationProfile& profile, std::span<const RecordedRunSpec> specs,
                                     const PipelineOptions& options) {
  profile.validate();
  PipelineResult result;
  for (const auto& spec : specs) {
    PipelineRun run;
    run.id = spec.id;
    run.level = spec.level;
    run.avatar = spec.avatar;
    run.levelData = generate_level(difficulty_preset(spec.level, spec.levelSeed));
    run.profile = profile;
    run.head = head_trace_from_csv(read_text_file(spec.trace));
    run.log = run_headless(run.levelData, profile, run.head, options.sim);
    run.log.levelId = spec.level;
    if (!spec.skeletons.empty()) {
      std::vector<std::vector<SkeletonFrame>> streams;
      for (const auto& p : spec.skeletons) streams.push_back(skeleton_from_jsonl(read_text_file(p)));
      run.angles = extract_angles(streams, options.minConf);
    }
    result.runs.push_back(std::move(run));
  }
  result.report = analyze(result.runs, options.analysisRate);
  return result;
}

void write_report_files(const AnalysisReport& report, const fs::path& dir) {
  write_file_atomic(dir / "report.md", report_markdown(report));
  write_file_atomic(dir / "correlation.csv", correlation_csv(report));
  write_file_atomic(dir / "correlation_runs.csv", correlation_runs_csv(report));
  write_file_atomic(dir / "table1.csv", table1_csv(report));
  write_file_atomic(dir / "table2.csv", table2_csv(report));
  write_file_atomic(dir / "plot_data.json", plot_data_json(report));
}

void write_pipeline_outputs(const PipelineResult& result, const fs::path& dir, const OutputOptions& options) {
  fs::create_directories(dir);
  Json manifest = {{"generator", std::string(kVersionTag)}, {"rate", result.report.rate}};
  Json subjects = Json::array();
  for (const auto& s : result.subjects) {
    char name[16];
    std::snprintf(name, sizeof name, "s%02d", s.index);
    const fs::path sub = fs::path("subjects") / name;
    write_file_atomic(dir / sub / "calibration.csv", head_trace_to_csv(s.calibration.head));
    write_file_atomic(dir / sub / "schedule.json", to_json(s.calibration.schedule).dump(1) + "\n");
    write_file_atomic(dir / sub / "profile.json", to_json(s.profile).dump(1) + "\n");
    subjects.push_back({{"index", s.index}, {"profile", (sub / "profile.json").generic_string()}});
  }
  manifest["subjects"] = subjects;

  Json runs = Json::array();
  for (const auto& r : result.runs) {
    const fs::path rd = fs::path("runs") / r.id;
    Json files = {{"level", (rd / "level.json").generic_string()},
                  {"profile", (rd / "profile.json").generic_string()},
                  {"head", (rd / "head.csv").generic_string()},
                  {"runlog", (rd / "run.jsonl").generic_string()}};
    write_file_atomic(dir / rd / "level.json", serialize_level(r.levelData));
    write_file_atomic(dir / rd / "profile.json", to_json(r.profile).dump(1) + "\n");
    write_file_atomic(dir / rd / "head.csv", head_trace_to_csv(r.head));
    write_file_atomic(dir / rd / "run.jsonl", serialize_run_log(r.log));
    if (r.angles.size() > 0) {
      write_file_atomic(dir / rd / "angles.csv", angle_series_to_csv(r.angles));
      files["angles"] = (rd / "angles.csv").generic_string();
    }
    if (options.skeletons) {
      Json cams = Json::array();
      for (std::size_t c = 0; c < r.cameras.size(); ++c) {
        if (r.cameras[c].empty()) continue;
        const fs::path p = rd / ("camera" + std::to_string(c + 1) + ".jsonl");
        write_file_atomic(dir / p, skeleton_to_jsonl(r.cameras[c]));
        cams.push_back(p.generic_string());
      }
      files["skeletons"] = cams;
    }
    const int cubes = static_cast<int>(r.levelData.props.cubes.size());
    runs.push_back({{"id", r.id},
                    {"subject", r.subject},
                    {"level", r.level},
                    {"avatar", r.avatar},
                    {"levelSeed", r.levelData.params.seed},
                    {"finished", r.log.finished},
                    {"finishTime", r.log.finishTime},
                    {"score", r.log.states.empty() ? 0 : r.log.states.back().score},
                    {"cubes", cubes},
                    {"files", files}});
  }
  manifest["runs"] = runs;
  write_file_atomic(dir / "manifest.json", manifest.dump(1) + "\n");
  write_report_files(result.report, dir);
}

AnalysisReport analyze_output_dir(const fs::path& dir, double rate) {
  const std::string text = read_text_file(dir / "manifest.json");
  Json manifest;
  try {
    manifest = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "manifest.json: " + std::string(e.what()));
  }
  std::vector<RunAnalysisInput> inputs;
  try {
    for (const auto& r : manifest.at("runs")) {
      RunAnalysisInput in;
      in.id = r.at("id").get<std::string>();
      in.subject = r.value("subject", 0);
      in.level = r.at("level").get<int>();
      in.avatar = r.at("avatar").get<bool>();
      const auto& files = r.at("files");
      in.profile = profile_from_json(Json::parse(read_text_file(dir / files.at("profile").get<std::string>())));
      in.head = head_trace_from_csv(read_text_file(dir / files.at("head").get<std::string>()));
      if (files.contains("angles")) in.angles = angle_series_from_csv(read_text_file(dir / files.at("angles").get<std::string>()));
      inputs.push_back(std::move(in));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, "manifest.json: " + std::string(e.what()));
  }
  return analyze_runs(inputs, rate);
}

}  // namespace skitrain
