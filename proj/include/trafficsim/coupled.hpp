#pragma once

#include <functional>
#include <vector>

#include "trafficsim/macro.hpp"
#include "trafficsim/micro.hpp"

namespace traffic {

// Micro vehicles whose accident process is taken verbatim from a concurrently
// advanced macro state: the macro side owns every random draw, the micro side
// only moves positions under the macro accident set.
struct CoupledState {
  MacroState macro;
  std::vector<double> x;  // unwrapped, same conventions as MicroState
  double L = 0.0;

  double t() const { return macro.t; }
};

class CoupledModel {
 public:
  CoupledModel(RoadConfig road, VelocityModel vel, EventParams par, MacroOptions macro_opt = {},
               MicroOptions micro_opt = {});

  CoupledState init(int n_cells, int n_vehicles,
                    const std::function<double(double)>& rho0) const;
  // Macro events + solver step, then the Euler position update under the
  // refreshed accident set.
  EventOutcome step(CoupledState& st, double dt, const StepDraws& d);
  EventOutcome step(CoupledState& st, double dt, DrawStream& stream);

  double micro_density_at(const CoupledState& st, double pos) const;

  MacroModel& macro() { return macro_; }
  const MacroModel& macro() const { return macro_; }
  const MicroOptions& micro_options() const { return micro_opt_; }

 private:
  MacroModel macro_;
  MicroModel micro_;  // init/options helper; holds no state
  MicroOptions micro_opt_;
};

}  // namespace traffic
