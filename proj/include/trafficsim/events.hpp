#pragma once

#include <functional>

#include "trafficsim/capacity.hpp"
#include "trafficsim/rng.hpp"
#include "trafficsim/sampling.hpp"

namespace traffic {

struct EventParams {
  double lambda_flux = 1.0 / 160.0;  // accident rate per unit of flux mass
  double lambda_jam = 1.0 / 50.0;    // accident rate per unit of positive density increase
  double lambda_dissolve = 0.25;     // dissolution rate per active accident
  double beta = 0.5;                 // share of flux-weighted position draws
  Distribution size_dist = Distribution::uniform(0.2, 1.0);
  Distribution cap_dist = Distribution::discrete({0.5, 0.99}, {0.5, 0.5});
  double c_max = 0.99;
  int max_accidents = 64;

  void validate() const;  // throws std::invalid_argument
};

struct WarningCounters {
  long prob_clamped = 0;       // dt * psi exceeded 1 and was clamped
  long accident_overflow = 0;  // accident table full, birth dropped
  long cfl_relaxed = 0;        // steps taken beyond the collision-free bound
  long clamped_cells = 0;      // cells nudged back into [0, 1]
  long measure_fallback = 0;   // position measure swapped for the other component
  long out_of_range_cells = 0; // cells observed outside [0, 1] (not clamped)
};

enum class EventKind { None, Add, Remove };

struct EventOutcome {
  EventKind kind = EventKind::None;
  Accident added{};        // valid when kind == Add
  Accident removed{};      // valid when kind == Remove (filled by the caller)
  int removed_index = -1;  // 0-based, valid when kind == Remove
  int u = 0;               // +1 birth, -1 dissolution, 0 nothing
  int l = 0;               // 1-based dissolving accident index, 0 otherwise
};

// Per-step transition probabilities for a fixed state (exposed for tests).
struct EventProbabilities {
  double p_none;
  double p_add;
  double p_remove;
};

EventProbabilities event_probabilities(double dt, double add_rate, double remove_rate,
                                       WarningCounters* warn = nullptr);

// Shared per-step event kernel. add_rate = lambda_F * C_F + lambda_D * D+,
// remove_rate = M * lambda_R. The position samplers map one uniform to a
// position; *_ok flags say whether the corresponding measure has positive mass.
// Consumes no randomness beyond the supplied block.
EventOutcome sample_event(double dt, double add_rate, int n_accidents,
                          const EventParams& par, const StepDraws& d,
                          bool type1_ok, bool type2_ok,
                          const std::function<double(double)>& sample_type1,
                          const std::function<double(double)>& sample_type2,
                          WarningCounters& warn);

}  // namespace traffic
