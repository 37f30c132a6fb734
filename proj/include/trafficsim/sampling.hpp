#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace traffic {

struct DegenerateMeasureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scalar distribution for accident size / severity draws.
struct Distribution {
  enum class Kind { Uniform, Discrete };

  Kind kind = Kind::Uniform;
  double lo = 0.0, hi = 1.0;        // Uniform
  std::vector<double> atoms;        // Discrete
  std::vector<double> weights;      // positive, same length as atoms

  static Distribution uniform(double lo, double hi);
  static Distribution discrete(std::vector<double> atoms, std::vector<double> weights);

  void validate() const;  // throws std::invalid_argument
  double sample(double u) const;  // u in [0, 1)
  double min_value() const;
  double max_value() const;
};

// Measure with a piecewise-constant density over contiguous intervals;
// sampled by inverting the piecewise-linear CDF with a single uniform.
struct IntervalMeasure {
  std::vector<double> left;    // interval left endpoints
  std::vector<double> length;  // interval lengths (> 0)
  std::vector<double> weight;  // nonnegative interval masses
  double total = 0.0;

  bool degenerate() const { return !(total > 0.0); }
  // throws DegenerateMeasureError when total mass is zero
  double sample(double u) const;
};

// Purely atomic measure.
struct AtomMeasure {
  std::vector<double> atom;
  std::vector<double> weight;
  double total = 0.0;

  bool degenerate() const { return !(total > 0.0); }
  double sample(double u) const;
};

}  // namespace traffic
