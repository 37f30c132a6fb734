#pragma once

#include <span>
#include <vector>

namespace traffic {

// Compensated summation; keeps long-running mass audits meaningful.
inline double kahan_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Sum of positive increases around the cycle: sum_i (v[i+1] - v[i])+ with wrap.
inline double positive_increase_sum(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    double d = v[i + 1] - v[i];
    if (d > 0.0) s += d;
  }
  double d = v.front() - v.back();
  if (d > 0.0) s += d;
  return s;
}

}  // namespace traffic
