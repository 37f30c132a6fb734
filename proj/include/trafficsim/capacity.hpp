#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace traffic {

// Piecewise-constant road capacity on the periodic interval [a, b), with
// optional linear smoothing of width `smoothing_width` centered on each jump.
struct RoadSegment {
  double from;    // left endpoint of the segment
  double factor;  // capacity value on [from, next.from)
};

struct RoadConfig {
  double a = -10.0;
  double b = 10.0;
  std::vector<RoadSegment> segments{{-10.0, 1.0}};  // sorted, segments[0].from == a
  double smoothing_width = 0.02;

  double span() const { return b - a; }
  // Map any real position into [a, b).
  double wrap(double x) const {
    double s = span();
    double y = x - s * std::floor((x - a) / s);
    if (y >= b) y = a;  // guard against rounding at the seam
    return y;
  }
  void validate() const;  // throws std::invalid_argument
  double min_factor() const;
  double max_factor() const;
  double raw_at(double x) const;       // no smoothing
  double smoothed_at(double x) const;  // linear ramps across jumps
  double at(double x, bool smooth) const { return smooth ? smoothed_at(x) : raw_at(x); }
};

// One accident: capacity on [p - s/2, p + s/2] (periodic wrap) drops by factor (1 - c).
struct Accident {
  double p = 0.0;  // center
  double s = 0.0;  // affected length
  double c = 0.0;  // severity in [0, c_max]
};

struct AccidentSet {
  std::vector<Accident> items;

  int count() const { return static_cast<int>(items.size()); }
  bool empty() const { return items.empty(); }
  // Product of (1 - c_j) over accidents whose interval covers x.
  double factor_at(double x, const RoadConfig& road) const;
  // Same, but each accident's indicator gets linear ramps of width eps at its
  // edges (used by the frozen-capacity solver harness, which needs Lipschitz input).
  double smoothed_factor_at(double x, const RoadConfig& road, double eps) const;
};

struct VelocityModel {
  double v_scale = 1.0;

  double v(double rho) const { return v_scale * std::max(0.0, 1.0 - rho); }
  double flux(double c, double rho) const { return c * rho * v(rho); }
  // argmax of rho * v(rho); independent of v_scale
  static constexpr double rho_star = 0.5;
};

double road_capacity(double x, const RoadConfig& road);  // smoothed
double accident_capacity(double x, const AccidentSet& acc, const RoadConfig& road);
double total_capacity(double x, const AccidentSet& acc, const RoadConfig& road,
                      bool smooth_road = true);

}  // namespace traffic
