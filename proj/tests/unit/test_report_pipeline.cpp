#include <doctest.h>

#include <filesystem>

#include "skitrain/io.hpp"
#include "skitrain/pipeline.hpp"

using namespace skitrain;

namespace {

const PipelineResult& small_cohort() {
  static const PipelineResult result = [] {
    PipelineOptions opt;
    opt.subjects = 4;
    opt.seed = 11;
    return run_synthetic_pipeline(opt);
  }();
  return result;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("skitrain-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("synthetic cohort shape") {
  const PipelineResult& r = small_cohort();
  CHECK(r.subjects.size() == 4);
  CHECK(r.runs.size() == 4 * 3 * 2);
  CHECK(r.report.runCount == r.runs.size());
  for (const auto& run : r.runs) {
    CHECK(run.log.finished);
    CHECK(run.log.states.back().score == static_cast<int>(run.levelData.props.cubes.size()));
    CHECK(run.angles.size() > 100);
  }
  CHECK(subject_level_seed(11, 0, 1) != subject_level_seed(11, 1, 1));
  CHECK(subject_level_seed(11, 0, 1) != subject_level_seed(11, 0, 2));
}

TEST_CASE("level trends in a small cohort") {
  const LevelSummary& s = small_cohort().report.summary;
  for (bool avatar : {true, false}) {
    CHECK(s.headDistance.at({1, avatar}).mean < s.headDistance.at({2, avatar}).mean);
    CHECK(s.headDistance.at({2, avatar}).mean < s.headDistance.at({3, avatar}).mean);
  }
  const auto sag = static_cast<std::size_t>(Angle::Sagittal);
  CHECK(s.angleMax.at(1)[sag]->mean < s.angleMax.at(2)[sag]->mean);
  CHECK(s.angleMax.at(2)[sag]->mean < s.angleMax.at(3)[sag]->mean);
}

TEST_CASE("lean axis correlates with sagittal plane angle") {
  const AnalysisReport& rep = small_cohort().report;
  CHECK(reported_category(rep, PoseChannel::X, Angle::Sagittal) == CorrelationCategory::VeryHigh);
  const auto z = reported_category(rep, PoseChannel::Z, Angle::Frontal);
  REQUIRE(z);
  CHECK(*z >= CorrelationCategory::High);
  REQUIRE(rep.band);
  CHECK(rep.band->slope > 0.0);
  CHECK(rep.scatter.size() <= rep.pooled.at(PoseChannel::X, Angle::Sagittal)->n);
}

TEST_CASE("pipeline is deterministic") {
  PipelineOptions opt;
  opt.subjects = 2;
  opt.seed = 5;
  const PipelineResult a = run_synthetic_pipeline(opt);
  const PipelineResult b = run_synthetic_pipeline(opt);
  CHECK(report_markdown(a.report) == report_markdown(b.report));
  CHECK(correlation_csv(a.report) == correlation_csv(b.report));
  CHECK(plot_data_json(a.report) == plot_data_json(b.report));
  REQUIRE(a.runs.size() == b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) CHECK(serialize_run_log(a.runs[i].log) == serialize_run_log(b.runs[i].log));
  opt.seed = 6;
  CHECK(report_markdown(run_synthetic_pipeline(opt).report) != report_markdown(a.report));
}

TEST_CASE("output directory rebuilds the same report") {
  const auto dir = scratch("report-test");
  const PipelineResult& r = small_cohort();
  write_pipeline_outputs(r, dir);
  for (const char* f : {"report.md", "correlation.csv", "correlation_runs.csv", "table1.csv", "table2.csv", "plot_data.json"})
    CHECK(std::filesystem::exists(dir / f));
  const AnalysisReport rebuilt = analyze_output_dir(dir, r.report.rate);
  CHECK(report_markdown(rebuilt) == report_markdown(r.report));
  CHECK(table1_csv(rebuilt) == table1_csv(r.report));
  CHECK(table2_csv(rebuilt) == table2_csv(r.report));
  const Json plot = Json::parse(read_text_file(dir / "plot_data.json"));
  CHECK(plot.contains("scatter"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("report layout") {
  const std::string md = report_markdown(small_cohort().report);
  CHECK(md.find("| Sagittal Plane [deg] |") != std::string::npos);
  CHECK(md.find("Deviation to Lv1 [pp]") != std::string::npos);
  CHECK(md.find("| w/o |") != std::string::npos);
  CHECK(md.find("`very-high`") != std::string::npos);
  const std::string t1 = table1_csv(small_cohort().report);
  CHECK(t1.find("row,level,mean,std,n\n") != std::string::npos);
}

TEST_CASE("empty analysis omits cells") {
  const AnalysisReport rep = analyze_runs(std::vector<RunAnalysisInput>{});
  CHECK(rep.runCount == 0);
  CHECK(!reported_category(rep, PoseChannel::X, Angle::Sagittal));
  CHECK(!rep.band);
  CHECK(!report_markdown(rep).empty());
}
