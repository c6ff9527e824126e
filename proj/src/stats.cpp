#include "skitrain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace skitrain {

namespace {

/// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::InvalidInput, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::InvalidInput, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lnFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(lnFront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorKind::InvalidInput, "degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided_p(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidInput, "quantile needs p in (0, 1)");
  if (!(df > 0.0)) throw Error(ErrorKind::InvalidInput, "degrees of freedom must be > 0");
  if (p == 0.5) return 0.0;
  // Solve on the upper half in terms of the two-sided tail, which keeps
  // precision for p close to 1.
  const double tail = 2.0 * (p > 0.5 ? 1.0 - p : p);
  double lo = 0.0, hi = 1.0;
  while (student_t_two_sided_p(hi, df) > tail) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (student_t_two_sided_p(mid, df) > tail ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return p > 0.5 ? t : -t;
}

// ---------------------------------------------------------------------------

namespace {

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
}

}  // namespace

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidInput, "pearson inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::InsufficientData, "pearson needs at least 3 pairs, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0 || constant(x) || constant(y))
    throw Error(ErrorKind::ZeroVariance, "pearson input series is constant");
  PearsonResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double oneMinusR2 = 1.0 - res.r * res.r;
  // t^2 = r^2 (n-2) / (1-r^2), so df / (df + t^2) = 1 - r^2.
  res.p = oneMinusR2 <= 0.0 ? 0.0 : incomplete_beta(0.5 * static_cast<double>(n - 2), 0.5, oneMinusR2);
  return res;
}

PearsonResult pearson(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidInput, "pearson inputs differ in length");
  std::vector<double> xs, ys;
  xs.reserve(x.size());
  ys.reserve(y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] && y[i]) {
      xs.push_back(*x[i]);
      ys.push_back(*y[i]);
    }
  return pearson(std::span<const double>(xs), std::span<const double>(ys));
}

std::string_view correlation_category_name(CorrelationCategory c) {
  switch (c) {
    case CorrelationCategory::Negligible: return "negligible";
    case CorrelationCategory::Low: return "low";
    case CorrelationCategory::Moderate: return "moderate";
    case CorrelationCategory::High: return "high";
    case CorrelationCategory::VeryHigh: return "very high";
  }
  return "negligible";
}

CorrelationCategory classify_correlation(double absR) {
  if (!(absR >= 0.0 && absR <= 1.0)) throw Error(ErrorKind::InvalidInput, "absolute correlation must be in [0, 1]");
  if (absR >= 0.9) return CorrelationCategory::VeryHigh;
  if (absR >= 0.7) return CorrelationCategory::High;
  if (absR >= 0.5) return CorrelationCategory::Moderate;
  if (absR >= 0.3) return CorrelationCategory::Low;
  return CorrelationCategory::Negligible;
}

std::string_view pose_channel_name(PoseChannel c) {
  switch (c) {
    case PoseChannel::X: return "x";
    case PoseChannel::Y: return "y";
    case PoseChannel::Z: return "z";
    case PoseChannel::EulerX: return "eulerX";
    case PoseChannel::EulerY: return "eulerY";
    case PoseChannel::EulerZ: return "eulerZ";
  }
  return "x";
}

void AlignedSeries::append(const AlignedSeries& other) {
  times.insert(times.end(), other.times.begin(), other.times.end());
  for (std::size_t c = 0; c < kPoseChannelCount; ++c) head[c].insert(head[c].end(), other.head[c].begin(), other.head[c].end());
  for (std::size_t a = 0; a < kAngleCount; ++a)
    angles[a].insert(angles[a].end(), other.angles[a].begin(), other.angles[a].end());
}

CorrelationMatrix correlation_matrix(const AlignedSeries& series) {
  CorrelationMatrix m;
  for (std::size_t c = 0; c < kPoseChannelCount; ++c)
    for (std::size_t a = 0; a < kAngleCount; ++a) {
      try {
        const PearsonResult pr = pearson(std::span<const std::optional<double>>(series.head[c]),
                                         std::span<const std::optional<double>>(series.angles[a]));
        CorrelationCell cell;
        cell.channel = pose_channel_at(c);
        cell.angle = angle_at(a);
        cell.r = pr.r;
        cell.absR = std::abs(pr.r);
        cell.n = pr.n;
        cell.p = pr.p;
        cell.category = classify_correlation(cell.absR);
        m.cells[c][a] = cell;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::InsufficientData) throw;
      }
    }
  return m;
}

AlignedSeries align_series(std::span<const HeadPoseSample> head, const AngleSeries& angles, double rate) {
  if (!(rate > 0.0)) throw Error(ErrorKind::InvalidInput, "rate must be > 0");
  if (head.size() < 2 || angles.size() < 2) throw Error(ErrorKind::EmptySeries, "alignment needs at least 2 samples on each side");
  const double start = std::max(head.front().t, angles.times.front());
  const double end = std::min(head.back().t, angles.times.back());
  AlignedSeries out;
  if (!(end > start)) return out;
  const std::size_t n = uniform_count(start, end, rate);
  out.times.resize(n);
  for (auto& h : out.head) h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.times[i] = uniform_time(start, rate, i);
    if (const auto pose = head_pose_at(head, out.times[i])) {
      const double v[kPoseChannelCount] = {pose->pos.x, pose->pos.y, pose->pos.z, pose->orient.x, pose->orient.y, pose->orient.z};
      for (std::size_t c = 0; c < kPoseChannelCount; ++c) out.head[c][i] = v[c];
    }
  }
  for (std::size_t a = 0; a < kAngleCount; ++a) {
    const auto column = angles.column(angle_at(a));
    out.angles[a] = resample_with_gaps(angles.times, column, start, rate, n);
  }
  return out;
}

// ---------------------------------------------------------------------------

double RegressionBand::half_width(double x) const {
  const double dx = x - xMean;
  return tCritical * residualStd * std::sqrt(1.0 + 1.0 / static_cast<double>(n) + dx * dx / sxx);
}

RegressionBand fit_prediction_interval(std::span<const double> x, std::span<const double> y, double level) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidInput, "regression inputs differ in length");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidInput, "interval level must be in (0, 1)");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::InsufficientData, "regression needs at least 3 points, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || constant(x)) throw Error(ErrorKind::ZeroVariance, "regression x values are constant");
  RegressionBand band;
  band.n = n;
  band.level = level;
  band.xMean = mx;
  band.sxx = sxx;
  band.slope = sxy / sxx;
  band.intercept = my - band.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - band.predict(x[i]);
    sse += e * e;
  }
  const double df = static_cast<double>(n - 2);
  band.residualStd = std::sqrt(sse / df);
  band.tCritical = student_t_quantile(0.5 + 0.5 * level, df);
  return band;
}

// ---------------------------------------------------------------------------

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "mean_std needs at least one value");
  MeanStd m;
  m.n = values.size();
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

std::array<std::optional<double>, kAngleCount> max_abs_movement_deg(const AngleSeries& series) {
  std::array<std::optional<double>, kAngleCount> out{};
  for (const auto& set : series.angles)
    for (std::size_t a = 0; a < kAngleCount; ++a)
      if (const auto& v = set.values[a]) {
        const double deg = rad_to_deg(std::abs(*v));
        if (!out[a] || deg > *out[a]) out[a] = deg;
      }
  return out;
}

MeanStd deviation_percent(std::span<const std::optional<double>> values, std::span<const std::optional<double>> reference) {
  if (values.size() != reference.size()) throw Error(ErrorKind::InvalidInput, "deviation inputs differ in length");
  std::vector<double> pct;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] && reference[i] && *reference[i] != 0.0) pct.push_back(100.0 * (*values[i] - *reference[i]) / *reference[i]);
  MeanStd m = mean_std(pct);
  m.std *= m.n > 1 ? std::sqrt(static_cast<double>(m.n - 1) / static_cast<double>(m.n)) : 0.0;
  return m;
}

LevelSummary level_summary(std::span<const RunRecord> runs) {
  LevelSummary out;
  std::map<int, std::array<std::vector<double>, kAngleCount>> maxima;
  std::map<std::pair<int, bool>, std::vector<double>> distances;
  std::map<bool, std::vector<double>> distancesByAvatar;
  for (const auto& run : runs) {
    const auto m = max_abs_movement_deg(run.angles);
    auto& slot = maxima[run.level];
    for (std::size_t a = 0; a < kAngleCount; ++a)
      if (m[a]) slot[a].push_back(*m[a]);
    if (!run.headPositions.empty()) {
      const double d = path_length(run.headPositions);
      distances[{run.level, run.avatar}].push_back(d);
      distancesByAvatar[run.avatar].push_back(d);
    }
  }
  for (auto& [level, perAngle] : maxima) {
    auto& dst = out.angleMax[level];
    for (std::size_t a = 0; a < kAngleCount; ++a)
      if (!perAngle[a].empty()) {
        // Sorting first makes the sums independent of run order.
        std::sort(perAngle[a].begin(), perAngle[a].end());
        dst[a] = mean_std(perAngle[a]);
      }
  }
  auto means = [](const std::array<std::optional<MeanStd>, kAngleCount>& cells) {
    std::array<std::optional<double>, kAngleCount> v{};
    for (std::size_t a = 0; a < kAngleCount; ++a)
      if (cells[a]) v[a] = cells[a]->mean;
    return v;
  };
  if (const auto ref = out.angleMax.find(1); ref != out.angleMax.end()) {
    const auto refMeans = means(ref->second);
    for (const auto& [level, cells] : out.angleMax) {
      if (level == 1) continue;
      const auto m = means(cells);
      try {
        out.deviationToLevel1[level] = deviation_percent(m, refMeans);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
      }
    }
  }
  for (auto& [key, values] : distances) {
    std::sort(values.begin(), values.end());
    out.headDistance[key] = mean_std(values);
  }
  for (auto& [avatar, values] : distancesByAvatar) {
    std::sort(values.begin(), values.end());
    out.headDistanceAverage[avatar] = mean_std(values);
  }
  return out;
}

}  // namespace skitrain
