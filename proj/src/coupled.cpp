#include "trafficsim/coupled.hpp"

namespace traffic {

CoupledModel::CoupledModel(RoadConfig road, VelocityModel vel, EventParams par,
                           MacroOptions macro_opt, MicroOptions micro_opt)
    : macro_(road, vel, par, macro_opt),
      micro_(std::move(road), vel, std::move(par), micro_opt),
      micro_opt_(micro_opt) {}

CoupledState CoupledModel::init(int n_cells, int n_vehicles,
                                const std::function<double(double)>& rho0) const {
  CoupledState st;
  st.macro = macro_.init_cells(n_cells, rho0);
  MicroState mic = micro_.state_from_profile(n_vehicles, rho0);
  st.x = std::move(mic.x);
  st.L = mic.L;
  return st;
}

EventOutcome CoupledModel::step(CoupledState& st, double dt, const StepDraws& d) {
  EventOutcome out = macro_.step_events(st.macro, dt, d);
  const RoadConfig& road = macro_.road();
  double bound = micro_.cfl_dt(st.L);
  if (dt > bound * (1.0 + 1e-12)) {
    if (micro_opt_.enforce_cfl)
      throw std::domain_error("coupled: dt exceeds the collision-free bound L/v_max");
    ++micro_.warnings().cfl_relaxed;
  }
  const AccidentSet& acc = st.macro.acc;
  advance_positions_substepped(
      st.x, st.L, dt, bound,
      [&](double p) { return road.smoothed_at(p) * acc.factor_at(p, road); },
      macro_.velocity(), road);
  return out;
}

EventOutcome CoupledModel::step(CoupledState& st, double dt, DrawStream& stream) {
  return step(st, dt, stream.next_step());
}

double CoupledModel::micro_density_at(const CoupledState& st, double pos) const {
  return traffic::micro_density_at(st.x, st.L, macro_.road(), pos);
}

}  // namespace traffic
