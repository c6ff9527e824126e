#pragma once

#include <cmath>

#include "skitrain/terrain.hpp"

namespace testsupport {

// Straight corridor down a uniform plane; no arcs, so the track is the
// fall line from the origin.
inline skitrain::Level straight_level(double slopeDeg, double length = 60.0, double halfWidth = 6.0) {
  using namespace skitrain;
  Level lv;
  lv.params = difficulty_preset(1);
  lv.params.baseSlope = deg_to_rad(slopeDeg);
  lv.params.noiseAmplitude = 0.0;
  lv.params.corridorHalfWidth = halfWidth;
  lv.track.start = {0.0, 0.0};
  lv.track.goalArcLength = length;
  Heightmap& hm = lv.heightmap;
  hm.cellSize = 1.0;
  hm.originXZ = {-30.0, -length - 20.0};
  hm.cols = 61;
  hm.rows = static_cast<int>(length) + 31;
  for (int r = 0; r < hm.rows; ++r)
    for (int c = 0; c < hm.cols; ++c) hm.heights.push_back(static_cast<float>(base_height(lv.params, lv.track.start, hm.node(r, c))));
  return lv;
}

// Tanh-sinh quadrature in long double of the incomplete beta integrand
// over [0, x]. The substitution t = x * sigmoid(pi sinh(s)) keeps t and
// 1 - t accurate near the endpoints.
inline long double beta_quadrature(long double a, long double b, long double x) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double logB = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const long double h = 1.0L / 256;
  long double sum = 0.0L;
  for (long double s = -6.0L; s <= 6.0L; s += h) {
    const long double z = pi * std::sinh(s);
    const long double sig = 1.0L / (1.0L + std::exp(-z));
    const long double t = x * sig;
    // dt/ds = x * sig * (1 - sig) * pi * cosh(s)
    const long double w = x * sig * (1.0L / (1.0L + std::exp(z))) * pi * std::cosh(s);
    if (t <= 0.0L || w == 0.0L) continue;
    sum += w * std::exp((a - 1) * std::log(t) + (b - 1) * std::log1p(-t) - logB);
  }
  return sum * h;
}

}  // namespace testsupport
