#include "trafficsim/events.hpp"

#include <algorithm>
#include <cmath>

namespace traffic {

void EventParams::validate() const {
  if (!(lambda_flux >= 0.0) || !(lambda_jam >= 0.0) || !(lambda_dissolve >= 0.0))
    throw std::invalid_argument("events: rates must be nonnegative");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("events: beta must lie in [0, 1]");
  size_dist.validate();
  cap_dist.validate();
  if (!(size_dist.min_value() > 0.0))
    throw std::invalid_argument("events: accident sizes must be positive");
  if (!(c_max < 1.0)) throw std::invalid_argument("events: c_max must be < 1");
  if (cap_dist.min_value() < 0.0 || cap_dist.max_value() > c_max)
    throw std::invalid_argument("events: severity support must lie in [0, c_max]");
  if (max_accidents < 1) throw std::invalid_argument("events: max_accidents must be >= 1");
}

EventProbabilities event_probabilities(double dt, double add_rate, double remove_rate,
                                       WarningCounters* warn) {
  EventProbabilities p{1.0, 0.0, 0.0};
  double psi = add_rate + remove_rate;
  if (!(psi > 0.0)) return p;
  double pe = dt * psi;
  if (pe > 1.0) {
    pe = 1.0;
    if (warn) ++warn->prob_clamped;
  }
  p.p_add = pe * add_rate / psi;
  p.p_remove = pe * remove_rate / psi;
  p.p_none = 1.0 - pe;
  return p;
}

EventOutcome sample_event(double dt, double add_rate, int n_accidents,
                          const EventParams& par, const StepDraws& d,
                          bool type1_ok, bool type2_ok,
                          const std::function<double(double)>& sample_type1,
                          const std::function<double(double)>& sample_type2,
                          WarningCounters& warn) {
  EventOutcome out;
  double remove_rate = n_accidents * par.lambda_dissolve;
  double psi = add_rate + remove_rate;
  if (!(psi > 0.0)) return out;

  double pe = dt * psi;
  if (pe > 1.0) {
    pe = 1.0;
    ++warn.prob_clamped;
  }
  if (d.event >= pe) return out;

  if (d.kind < add_rate / psi) {
    // birth
    if (n_accidents >= par.max_accidents) {
      ++warn.accident_overflow;
      return out;
    }
    bool want1 = d.type < par.beta;
    double pos;
    if (want1 ? type1_ok : type2_ok) {
      pos = want1 ? sample_type1(d.position) : sample_type2(d.position);
    } else if (want1 && type2_ok) {
      ++warn.measure_fallback;
      pos = sample_type2(d.position);
    } else if (!want1 && type1_ok) {
      ++warn.measure_fallback;
      pos = sample_type1(d.position);
    } else {
      return out;  // both measures degenerate: suppress, u stays 0
    }
    out.kind = EventKind::Add;
    out.added = Accident{pos, par.size_dist.sample(d.size), par.cap_dist.sample(d.capacity)};
    out.u = +1;
  } else {
    // dissolution
    if (n_accidents <= 0) return out;
    int idx = std::min(n_accidents - 1, static_cast<int>(d.removal * n_accidents));
    out.kind = EventKind::Remove;
    out.removed_index = idx;
    out.u = -1;
    out.l = idx + 1;
  }
  return out;
}

}  // namespace traffic
