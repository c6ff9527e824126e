#include "skitrain/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "skitrain/version.hpp"

namespace skitrain {

AlignedSeries align_run(const RunAnalysisInput& run, double rate) {
  std::vector<HeadPoseSample> head = run.head;
  const Vec3 center{run.profile.xCenter, run.profile.yUpright, run.profile.zCenter};
  for (auto& s : head) s.pos = s.pos - center;
  return align_series(head, run.angles, rate);
}

AnalysisReport analyze_runs(std::span<const RunAnalysisInput> runs, double rate) {
  AnalysisReport report;
  report.runCount = runs.size();
  report.rate = rate;
  AlignedSeries pooled;
  std::array<std::array<std::vector<double>, kAngleCount>, kPoseChannelCount> absR;
  std::vector<RunRecord> records;
  records.reserve(runs.size());
  for (const auto& run : runs) {
    // Runs without skeleton data still count toward head distance.
    if (run.angles.size() >= 2 && run.head.size() >= 2) {
      const AlignedSeries aligned = align_run(run, rate);
      const CorrelationMatrix m = correlation_matrix(aligned);
      for (std::size_t c = 0; c < kPoseChannelCount; ++c)
        for (std::size_t a = 0; a < kAngleCount; ++a)
          if (m.cells[c][a]) absR[c][a].push_back(m.cells[c][a]->absR);
      report.perRun.emplace_back(run.id, m);
      pooled.append(aligned);
    }

    RunRecord rec;
    rec.level = run.level;
    rec.avatar = run.avatar;
    rec.angles = run.angles;
    rec.headPositions.reserve(run.head.size());
    for (const auto& s : run.head) rec.headPositions.push_back(s.pos);
    records.push_back(std::move(rec));
  }
  report.pooled = correlation_matrix(pooled);
  for (std::size_t c = 0; c < kPoseChannelCount; ++c)
    for (std::size_t a = 0; a < kAngleCount; ++a)
      if (!absR[c][a].empty()) report.meanAbsR[c][a] = mean_std(absR[c][a]);
  report.summary = level_summary(records);

  const auto& xs = pooled.head[static_cast<std::size_t>(PoseChannel::X)];
  const auto& ys = pooled.angles[static_cast<std::size_t>(Angle::Sagittal)];
  std::vector<double> bx, by;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    if (xs[i] && ys[i]) {
      bx.push_back(*xs[i]);
      by.push_back(rad_to_deg(*ys[i]));
    }
  if (bx.size() >= 3) {
    try {
      report.band = fit_prediction_interval(bx, by, 0.95);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroVariance) throw;
    }
    const std::size_t stride = std::max<std::size_t>(1, bx.size() / 2000);
    for (std::size_t i = 0; i < bx.size(); i += stride) report.scatter.push_back({bx[i], by[i]});
  }
  return report;
}

std::optional<CorrelationCategory> reported_category(const AnalysisReport& report, PoseChannel c, Angle a) {
  const auto& cell = report.meanAbsR[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)];
  if (!cell) return std::nullopt;
  return classify_correlation(std::clamp(cell->mean, 0.0, 1.0));
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string pm(const MeanStd& m, int digits = 2) { return fixed(m.mean, digits) + " ± " + fixed(m.std, digits); }

std::string category_token(CorrelationCategory c) {
  std::string s(correlation_category_name(c));
  std::replace(s.begin(), s.end(), ' ', '-');
  return s;
}

std::vector<int> levels_of(const AnalysisReport& r) {
  std::vector<int> levels;
  for (const auto& [level, cells] : r.summary.angleMax) levels.push_back(level);
  for (const auto& [key, m] : r.summary.headDistance)
    if (std::find(levels.begin(), levels.end(), key.first) == levels.end()) levels.push_back(key.first);
  std::sort(levels.begin(), levels.end());
  return levels;
}

std::size_t pooled_n(const AnalysisReport& r) {
  std::size_t n = 0;
  for (const auto& row : r.pooled.cells)
    for (const auto& cell : row)
      if (cell) n = std::max(n, cell->n);
  return n;
}

}  // namespace

std::string report_markdown(const AnalysisReport& r) {
  std::string out;
  out += "# Training analysis report\n\n";
  out += "Generated by " + std::string(kVersionTag) + ". Runs: " + std::to_string(r.runCount) +
         ". Common clock: " + fixed(r.rate, 0) + " Hz.\n\n";

  out += "## Head pose vs. body angle correlation\n\n";
  out += "Absolute Pearson coefficient per cell: mean of per-run |r| with its category token. ";
  out += "p is the two-sided p-value over pooled samples (n up to " + std::to_string(pooled_n(r)) + ").\n\n";
  out += "| Channel |";
  for (std::size_t a = 0; a < kAngleCount; ++a) out += " " + std::string(angle_label(angle_at(a))) + " |";
  out += "\n|---|";
  for (std::size_t a = 0; a < kAngleCount; ++a) out += "---|";
  out += "\n";
  for (std::size_t c = 0; c < kPoseChannelCount; ++c) {
    out += "| " + std::string(pose_channel_name(pose_channel_at(c))) + " |";
    for (std::size_t a = 0; a < kAngleCount; ++a) {
      const auto& m = r.meanAbsR[c][a];
      const auto& p = r.pooled.cells[c][a];
      if (!m) {
        out += " n/a |";
        continue;
      }
      out += " " + fixed(m->mean, 2) + " `" + category_token(classify_correlation(std::clamp(m->mean, 0.0, 1.0))) + "`";
      if (p) out += " p=" + sci(p->p);
      out += " |";
    }
    out += "\n";
  }
  out += "\n";
  if (r.band) {
    out += "Prediction band for sagittal-plane angle (deg) from head x deviation (m): slope " + fixed(r.band->slope, 2) +
           " deg/m, intercept " + fixed(r.band->intercept, 2) + " deg, residual std " + fixed(r.band->residualStd, 3) +
           " deg, 95% half-width at mean x " + fixed(r.band->half_width(r.band->xMean), 3) + " deg, n = " +
           std::to_string(r.band->n) + ".\n\n";
  }

  const auto levels = levels_of(r);
  out += "## Maximum movement of joint angles\n\n";
  out += "Mean ± sample std of per-run maximum |movement| from the upright reference. Deg is degree; pp is percentage points.\n\n";
  out += "| Body Model |";
  for (int l : levels) out += " Level " + std::to_string(l) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < levels.size(); ++i) out += "---|";
  out += "\n";
  for (std::size_t a = 0; a < kAngleCount; ++a) {
    out += "| " + std::string(angle_label(angle_at(a))) + " [deg] |";
    for (int l : levels) {
      const auto it = r.summary.angleMax.find(l);
      if (it == r.summary.angleMax.end() || !it->second[a]) out += " (no data) |";
      else out += " " + pm(*it->second[a]) + " |";
    }
    out += "\n";
  }
  out += "| Deviation to Lv1 [pp] |";
  for (int l : levels) {
    if (l == 1) {
      out += " Ref. |";
      continue;
    }
    const auto it = r.summary.deviationToLevel1.find(l);
    out += it == r.summary.deviationToLevel1.end() ? " (no data) |" : " " + pm(it->second) + " |";
  }
  out += "\n\n";

  out += "## Head distance per level\n\n";
  out += "Total head path length per run, with (w) and without (w/o) the avatar, mean ± sample std.\n\n";
  out += "| Avatar |";
  for (int l : levels) out += " Level " + std::to_string(l) + " |";
  out += " Average |\n|---|";
  for (std::size_t i = 0; i <= levels.size(); ++i) out += "---|";
  out += "\n";
  for (const bool avatar : {true, false}) {
    out += std::string("| ") + (avatar ? "w" : "w/o") + " |";
    for (int l : levels) {
      const auto it = r.summary.headDistance.find({l, avatar});
      out += it == r.summary.headDistance.end() ? " (no data) |" : " " + pm(it->second) + " m |";
    }
    const auto avg = r.summary.headDistanceAverage.find(avatar);
    out += avg == r.summary.headDistanceAverage.end() ? " (no data) |\n" : " " + pm(avg->second) + " m |\n";
  }
  out += "\n---\n\n";
  out += "Notes: consecutive samples are autocorrelated, so p-values computed with df = n - 2 overstate significance. ";
  out += "No multiple-comparison correction is applied. Only linear models are fitted; nonlinear and mixed-effects models are future work.\n";
  return out;
}

std::string correlation_csv(const AnalysisReport& r) {
  std::string out = "# " + std::string(kVersionTag) + "\n";
  out += "channel,angle,mean_abs_r,std_abs_r,runs,category,pooled_r,pooled_p,pooled_n\n";
  for (std::size_t c = 0; c < kPoseChannelCount; ++c)
    for (std::size_t a = 0; a < kAngleCount; ++a) {
      const auto& m = r.meanAbsR[c][a];
      const auto& p = r.pooled.cells[c][a];
      out += std::string(pose_channel_name(pose_channel_at(c))) + "," + std::string(angle_key(angle_at(a))) + ",";
      if (m)
        out += fixed(m->mean, 6) + "," + fixed(m->std, 6) + "," + std::to_string(m->n) + "," +
               category_token(classify_correlation(std::clamp(m->mean, 0.0, 1.0)));
      else
        out += ",,0,";
      out += ",";
      if (p) out += fixed(p->r, 6) + "," + sci(p->p) + "," + std::to_string(p->n);
      else out += ",,0";
      out += "\n";
    }
  return out;
}

std::string correlation_runs_csv(const AnalysisReport& r) {
  std::string out = "# " + std::string(kVersionTag) + "\nrun,channel,angle,r,p,n\n";
  for (const auto& [id, m] : r.perRun)
    for (std::size_t c = 0; c < kPoseChannelCount; ++c)
      for (std::size_t a = 0; a < kAngleCount; ++a)
        if (const auto& cell = m.cells[c][a])
          out += id + "," + std::string(pose_channel_name(pose_channel_at(c))) + "," + std::string(angle_key(angle_at(a))) + "," +
                 fixed(cell->r, 6) + "," + sci(cell->p) + "," + std::to_string(cell->n) + "\n";
  return out;
}

std::string table1_csv(const AnalysisReport& r) {
  std::string out = "# " + std::string(kVersionTag) + "\nrow,level,mean,std,n\n";
  for (const auto& [level, cells] : r.summary.angleMax)
    for (std::size_t a = 0; a < kAngleCount; ++a)
      if (cells[a])
        out += std::string(angle_key(angle_at(a))) + "," + std::to_string(level) + "," + fixed(cells[a]->mean, 6) + "," +
               fixed(cells[a]->std, 6) + "," + std::to_string(cells[a]->n) + "\n";
  for (const auto& [level, m] : r.summary.deviationToLevel1)
    out += "deviationToLv1," + std::to_string(level) + "," + fixed(m.mean, 6) + "," + fixed(m.std, 6) + "," + std::to_string(m.n) + "\n";
  return out;
}

std::string table2_csv(const AnalysisReport& r) {
  std::string out = "# " + std::string(kVersionTag) + "\navatar,level,mean_m,std_m,n\n";
  for (const auto& [key, m] : r.summary.headDistance)
    out += std::string(key.second ? "w" : "w/o") + "," + std::to_string(key.first) + "," + fixed(m.mean, 6) + "," +
           fixed(m.std, 6) + "," + std::to_string(m.n) + "\n";
  for (const auto& [avatar, m] : r.summary.headDistanceAverage)
    out += std::string(avatar ? "w" : "w/o") + ",all," + fixed(m.mean, 6) + "," + fixed(m.std, 6) + "," + std::to_string(m.n) + "\n";
  return out;
}

std::string plot_data_json(const AnalysisReport& r) {
  nlohmann::json j;
  j["generator"] = std::string(kVersionTag);
  j["x"] = "head x deviation [m]";
  j["y"] = "sagittal plane [deg]";
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.scatter) pts.push_back({p.x, p.y});
  j["scatter"] = pts;
  if (r.band && !r.scatter.empty()) {
    const auto [lo, hi] = std::minmax_element(r.scatter.begin(), r.scatter.end(),
                                              [](const ScatterPoint& a, const ScatterPoint& b) { return a.x < b.x; });
    nlohmann::json fit = nlohmann::json::array(), lower = nlohmann::json::array(), upper = nlohmann::json::array();
    constexpr int kSteps = 50;
    for (int i = 0; i <= kSteps; ++i) {
      const double x = lo->x + (hi->x - lo->x) * i / kSteps;
      fit.push_back({x, r.band->predict(x)});
      lower.push_back({x, r.band->lower(x)});
      upper.push_back({x, r.band->upper(x)});
    }
    j["band"] = {{"level", r.band->level}, {"slope", r.band->slope}, {"intercept", r.band->intercept},
                 {"residualStd", r.band->residualStd}, {"n", r.band->n},
                 {"fit", fit}, {"lower", lower}, {"upper", upper}};
  }
  return j.dump(1) + "\n";
}

}  // namespace skitrain
