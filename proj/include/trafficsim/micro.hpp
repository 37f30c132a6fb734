#pragma once

#include <functional>
#include <span>
#include <vector>

#include "trafficsim/capacity.hpp"
#include "trafficsim/events.hpp"
#include "trafficsim/rng.hpp"
#include "trafficsim/sampling.hpp"

namespace traffic {

// Vehicle positions are stored unwrapped (strictly increasing reals) with
// x[0] kept in [a, b); x[n-1] < x[0] + span always holds. Wrapping happens
// only when positions are read back as road coordinates. This keeps vehicle
// indices stable across the periodic seam.
struct MicroState {
  std::vector<double> x;
  double L = 0.0;  // vehicle length
  double t = 0.0;
  AccidentSet acc;
  int u = 0;  // last event indicator: +1 birth, -1 dissolution, 0 nothing
  int l = 0;  // 1-based index of the last dissolved accident, 0 otherwise

  int n() const { return static_cast<int>(x.size()); }
};

struct MicroOptions {
  bool discrete_type1_measure = false;    // atoms at vehicles instead of the density measure
  bool smoothed_measure_capacity = false; // measure weights from smoothed road capacity
  bool enforce_cfl = true;                // reject steps beyond L / v_max
};

// Collision-free time-step bound.
inline double cfl_dt(double L, double v_max) { return L / v_max; }

// Piecewise-constant density field: value on [x_i, x_{i+1}) is L / headway_i.
double micro_density_at(std::span<const double> x_unwrapped, double L,
                        const RoadConfig& road, double pos);

// Forward-Euler position update shared with the coupled model. `capacity`
// maps a road coordinate to the total capacity used for the speeds. When
// dt exceeds the collision-free bound, displacements are capped so vehicles
// never close within L of their pre-step leader.
void advance_positions(std::vector<double>& x, double L, double dt,
                       const std::function<double(double)>& capacity,
                       const VelocityModel& vel, const RoadConfig& road);

// Advance over dt in equal Euler substeps no longer than the collision-free
// bound, so the anti-crossing cap in advance_positions stays inactive and the
// dynamics remain accurate when the shared time grid exceeds the bound.
void advance_positions_substepped(std::vector<double>& x, double L, double dt,
                                  double bound,
                                  const std::function<double(double)>& capacity,
                                  const VelocityModel& vel, const RoadConfig& road);

class MicroModel {
 public:
  MicroModel(RoadConfig road, VelocityModel vel, EventParams par, MicroOptions opt = {});

  // n equidistant vehicles of length L starting at a
  MicroState equidistant_state(int n, double L) const;
  // positions at the mass quantiles of rho0; L = (integral of rho0) / n
  MicroState state_from_profile(int n, const std::function<double(double)>& rho0) const;

  std::vector<double> local_densities(const MicroState& st) const;
  double cfl_dt(double L) const;  // collision-free bound L / v_max
  double capacity_at(double pos, const AccidentSet& acc) const;  // smoothed road
  void euler_step(MicroState& st, double dt);
  double flux_constant(const MicroState& st) const;  // C_F
  double jam_constant(const MicroState& st) const;   // total positive density increase

  IntervalMeasure flux_position_measure(const MicroState& st) const;
  AtomMeasure discrete_flux_position_measure(const MicroState& st) const;
  AtomMeasure jam_position_measure(const MicroState& st) const;

  // throws DegenerateMeasureError when the respective measure has zero mass
  double sample_position_type1(const MicroState& st, double u) const;
  double sample_position_type2(const MicroState& st, double u) const;
  // beta-mixture over the two measures with the stated degenerate fallback
  double sample_position(const MicroState& st, double u_type, double u_pos) const;

  double event_rate(const MicroState& st) const;  // psi
  // Applies the event kernel, then the Euler step, then advances time.
  EventOutcome step_events(MicroState& st, double dt, const StepDraws& d);
  EventOutcome step(MicroState& st, double dt, DrawStream& stream);

  double density_at(const MicroState& st, double pos) const;

  const RoadConfig& road() const { return road_; }
  const VelocityModel& velocity() const { return vel_; }
  const EventParams& params() const { return par_; }
  const MicroOptions& options() const { return opt_; }
  WarningCounters& warnings() { return warn_; }
  const WarningCounters& warnings() const { return warn_; }

 private:
  double measure_capacity_at(double pos, const AccidentSet& acc) const;

  RoadConfig road_;
  VelocityModel vel_;
  EventParams par_;
  MicroOptions opt_;
  WarningCounters warn_;
};

}  // namespace traffic
