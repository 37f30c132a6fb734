#include "trafficsim/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace traffic {

Distribution Distribution::uniform(double lo, double hi) {
  Distribution d;
  d.kind = Kind::Uniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Distribution Distribution::discrete(std::vector<double> atoms, std::vector<double> weights) {
  Distribution d;
  d.kind = Kind::Discrete;
  d.atoms = std::move(atoms);
  d.weights = std::move(weights);
  return d;
}

void Distribution::validate() const {
  if (kind == Kind::Uniform) {
    if (!(hi > lo)) throw std::invalid_argument("distribution: require hi > lo");
    return;
  }
  if (atoms.empty() || atoms.size() != weights.size())
    throw std::invalid_argument("distribution: atoms/weights size mismatch");
  double tot = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("distribution: weights must be positive");
    tot += w;
  }
  if (!(tot > 0.0)) throw std::invalid_argument("distribution: zero total weight");
}

double Distribution::sample(double u) const {
  if (kind == Kind::Uniform) return lo + u * (hi - lo);
  double tot = 0.0;
  for (double w : weights) tot += w;
  double target = u * tot;
  double cum = 0.0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    cum += weights[i];
    if (target < cum) return atoms[i];
  }
  return atoms.back();
}

double Distribution::min_value() const {
  if (kind == Kind::Uniform) return lo;
  return *std::min_element(atoms.begin(), atoms.end());
}

double Distribution::max_value() const {
  if (kind == Kind::Uniform) return hi;
  return *std::max_element(atoms.begin(), atoms.end());
}

double IntervalMeasure::sample(double u) const {
  if (degenerate()) throw DegenerateMeasureError("interval measure has zero mass");
  double target = u * total;
  size_t last = 0;
  for (size_t i = weight.size(); i-- > 0;)
    if (weight[i] > 0.0) { last = i; break; }
  double cum = 0.0;
  for (size_t i = 0; i <= last; ++i) {
    if (weight[i] <= 0.0) continue;
    double next = cum + weight[i];
    if (target < next || i == last) {
      double frac = std::clamp((target - cum) / weight[i], 0.0, 1.0);
      return left[i] + frac * length[i];
    }
    cum = next;
  }
  return left[last] + length[last];  // unreachable
}

double AtomMeasure::sample(double u) const {
  if (degenerate()) throw DegenerateMeasureError("atomic measure has zero mass");
  double target = u * total;
  double cum = 0.0;
  for (size_t i = 0; i < weight.size(); ++i) {
    cum += weight[i];
    if (target < cum) return atom[i];
  }
  for (size_t i = atom.size(); i-- > 0;)
    if (weight[i] > 0.0) return atom[i];
  return atom.back();  // unreachable
}

}  // namespace traffic
