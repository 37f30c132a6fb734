#pragma once

#include <functional>
#include <span>
#include <vector>

#include "trafficsim/capacity.hpp"
#include "trafficsim/events.hpp"
#include "trafficsim/rng.hpp"
#include "trafficsim/sampling.hpp"

namespace traffic {

enum class SolverKind { LaxFriedrichs, Godunov };

struct MacroState {
  std::vector<double> rho;  // cell means in [0, 1]
  double dx = 0.0;
  double t = 0.0;
  AccidentSet acc;
  std::vector<double> cap;  // total capacity at cell centers, synced with acc
  int u = 0;
  int l = 0;

  int k() const { return static_cast<int>(rho.size()); }
};

struct MacroOptions {
  SolverKind solver = SolverKind::Godunov;
  bool smooth_road_capacity = false;  // cell capacities from the smoothed road profile
};

// Godunov interface flux for the concave flux f(c, rho) = c * rho * v(rho):
// min of the demand at the left cell and the supply at the right cell,
// each with its own capacity.
double godunov_interface_flux(double c_left, double rho_left, double c_right,
                              double rho_right, const VelocityModel& vel);

class MacroModel {
 public:
  MacroModel(RoadConfig road, VelocityModel vel, EventParams par, MacroOptions opt = {});

  MacroState init_cells(int n_cells, const std::function<double(double)>& rho0) const;
  double cell_center(const MacroState& st, int i) const { return road_.a + (i + 0.5) * st.dx; }
  void refresh_capacity(MacroState& st) const;

  double max_dt(double dx) const;  // CFL bound dx / (max capacity * v_scale)
  void lxf_step(MacroState& st, double dt);
  void godunov_step(MacroState& st, double dt);
  void solver_step(MacroState& st, double dt);  // dispatch on options().solver

  double flux_constant(const MacroState& st) const;  // C_F
  double jam_constant(const MacroState& st) const;   // interface positive increases
  IntervalMeasure flux_position_measure(const MacroState& st) const;
  AtomMeasure jam_position_measure(const MacroState& st) const;
  double sample_position_type1(const MacroState& st, double u) const;
  double sample_position_type2(const MacroState& st, double u) const;
  double sample_position(const MacroState& st, double u_type, double u_pos) const;

  double event_rate(const MacroState& st) const;
  // Event kernel, capacity refresh, one solver step, time advance.
  EventOutcome step_events(MacroState& st, double dt, const StepDraws& d);
  EventOutcome step(MacroState& st, double dt, DrawStream& stream);

  double total_mass(const MacroState& st) const;     // compensated sum
  double density_at(const MacroState& st, double pos) const;  // left-closed cells

  const RoadConfig& road() const { return road_; }
  const VelocityModel& velocity() const { return vel_; }
  const EventParams& params() const { return par_; }
  const MacroOptions& options() const { return opt_; }
  WarningCounters& warnings() { return warn_; }
  const WarningCounters& warnings() const { return warn_; }

 private:
  void check_cfl(const MacroState& st, double dt) const;

  RoadConfig road_;
  VelocityModel vel_;
  EventParams par_;
  MacroOptions opt_;
  WarningCounters warn_;
};

}  // namespace traffic
