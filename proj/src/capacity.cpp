#include "trafficsim/capacity.hpp"

namespace traffic {

void RoadConfig::validate() const {
  if (!(b > a)) throw std::invalid_argument("road: require b > a");
  if (segments.empty()) throw std::invalid_argument("road: no segments");
  if (segments.front().from != a)
    throw std::invalid_argument("road: first segment must start at a");
  for (size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].factor > 0.0))
      throw std::invalid_argument("road: segment factors must be positive");
    if (i > 0 && !(segments[i].from > segments[i - 1].from))
      throw std::invalid_argument("road: segment starts must be strictly increasing");
    if (segments[i].from >= b)
      throw std::invalid_argument("road: segment start beyond b");
  }
  if (smoothing_width < 0.0)
    throw std::invalid_argument("road: smoothing width must be nonnegative");
  if (smoothing_width > 0.0) {
    for (size_t i = 0; i < segments.size(); ++i) {
      double right = (i + 1 < segments.size()) ? segments[i + 1].from : b;
      if (right - segments[i].from <= smoothing_width)
        throw std::invalid_argument("road: segment shorter than smoothing width");
    }
  }
}

double RoadConfig::min_factor() const {
  double m = segments.front().factor;
  for (const auto& s : segments) m = std::min(m, s.factor);
  return m;
}

double RoadConfig::max_factor() const {
  double m = segments.front().factor;
  for (const auto& s : segments) m = std::max(m, s.factor);
  return m;
}

double RoadConfig::raw_at(double x) const {
  double y = wrap(x);
  // last segment with from <= y
  size_t lo = 0;
  for (size_t i = 1; i < segments.size() && segments[i].from <= y; ++i) lo = i;
  return segments[lo].factor;
}

double RoadConfig::smoothed_at(double x) const {
  double v = raw_at(x);
  double w = smoothing_width;
  if (w <= 0.0) return v;
  double y = wrap(x);
  // Each jump (including the wrap seam at a/b when the end factors differ)
  // carries a linear ramp on [jump - w/2, jump + w/2].
  auto ramp = [&](double jump, double f_left, double f_right) -> bool {
    double d = y - jump;
    // periodic distance, jumps live on [a, b)
    double s = span();
    d -= s * std::round(d / s);
    if (std::abs(d) < 0.5 * w) {
      v = 0.5 * (f_left + f_right) + d * (f_right - f_left) / w;
      return true;
    }
    return false;
  };
  for (size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].factor != segments[i - 1].factor &&
        ramp(segments[i].from, segments[i - 1].factor, segments[i].factor))
      return v;
  }
  if (segments.back().factor != segments.front().factor)
    ramp(a, segments.back().factor, segments.front().factor);
  return v;
}

double AccidentSet::factor_at(double x, const RoadConfig& road) const {
  double s = road.span();
  double f = 1.0;
  for (const auto& acc : items) {
    if (acc.s >= s) {
      f *= 1.0 - acc.c;
      continue;
    }
    double d = std::remainder(x - acc.p, s);  // in [-s/2, s/2]
    if (std::abs(d) <= 0.5 * acc.s) f *= 1.0 - acc.c;
  }
  return f;
}

double AccidentSet::smoothed_factor_at(double x, const RoadConfig& road, double eps) const {
  if (eps <= 0.0) return factor_at(x, road);
  double s = road.span();
  double f = 1.0;
  for (const auto& acc : items) {
    if (acc.s >= s) {
      f *= 1.0 - acc.c;
      continue;
    }
    double d = std::abs(std::remainder(x - acc.p, s));
    double inner = 0.5 * acc.s - 0.5 * eps;   // fully inside
    double outer = 0.5 * acc.s + 0.5 * eps;   // fully outside
    if (d <= inner) {
      f *= 1.0 - acc.c;
    } else if (d < outer) {
      double frac = (outer - d) / eps;  // 1 at inner edge, 0 at outer edge
      f *= 1.0 - acc.c * frac;
    }
  }
  return f;
}

double road_capacity(double x, const RoadConfig& road) { return road.smoothed_at(x); }

double accident_capacity(double x, const AccidentSet& acc, const RoadConfig& road) {
  return acc.factor_at(x, road);
}

double total_capacity(double x, const AccidentSet& acc, const RoadConfig& road,
                      bool smooth_road) {
  return road.at(x, smooth_road) * acc.factor_at(x, road);
}

}  // namespace traffic
