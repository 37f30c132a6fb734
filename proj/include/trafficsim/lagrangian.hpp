#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "trafficsim/capacity.hpp"

namespace traffic {

// Inverse local densities w_i = headway_i / L on the uniform Lagrangian grid
// y_{i-1/2} = (i-1) * L. Vehicle length doubles as the grid spacing.
struct LagrangianState {
  std::vector<double> w;
  double L = 0.0;
  double t = 0.0;

  int n() const { return static_cast<int>(w.size()); }
};

// w_i from unwrapped positions; throws when a headway falls below L.
LagrangianState to_lagrangian(std::span<const double> x, double L, double span);

double tilde_v(double w, const VelocityModel& vel);  // = v(1/w), guarded for w <= 0

// Capacity along the Lagrangian coordinate for a frozen position snapshot:
// exact c(x_i) at grid points, position argument interpolated linearly in
// between.
class LagrangianCapacity {
 public:
  LagrangianCapacity(std::span<const double> x, double L, double span,
                     std::function<double(double)> cap);
  double at_grid(int i) const;  // c(x_i), cyclic index
  double at(double y) const;    // y in [0, n*L]
  std::vector<double> grid_values() const;

 private:
  std::vector<double> x_;
  double L_;
  double span_;
  std::function<double(double)> cap_;
};

// One step of the Lagrangian Lax-Friedrichs scheme on w; cap_grid holds the
// capacity at each vehicle's own grid point. CFL: (dt/L) * max|cap*v'| <= 1.
void lxf_lagrangian_step(LagrangianState& st, std::span<const double> cap_grid, double dt,
                         const VelocityModel& vel, bool enforce_cfl = true);

// Modified-Euler position update whose induced w-update is the
// pre-substitution form of the scheme above (consistency test target).
std::vector<double> lagrangian_position_step(std::span<const double> x, double L, double span,
                                             const std::function<double(double)>& cap,
                                             const VelocityModel& vel, double dt);

struct BoundViolation {
  double t = 0.0;
  int index = -1;
  double value = 0.0;
  double bound = 0.0;
  std::string which;  // "lower" or "upper"
};

struct BoundReport {
  int n_vehicles = 0;
  double T = 0.0;
  double dt = 0.0;
  double L = 0.0;
  double eps = 0.0;        // min w(0) - 1
  double eps_tilde = 0.0;  // safety margin, default eps / 2
  double lipschitz = 0.0;  // capacity Lipschitz estimate along y
  double w0_max = 0.0;
  double max_w = 0.0;
  double min_w = 0.0;
  std::vector<BoundViolation> violations;

  bool ok() const { return violations.empty(); }
};

struct LagrangianTrajectory {
  std::vector<LagrangianState> states;      // one per step, including t = 0
  std::vector<std::vector<double>> x;       // positions per step
  double L = 0.0;
};

// Co-evolves positions (modified Euler) and inverse densities (Lagrangian
// LxF) under a frozen capacity field.
class LagrangianDriver {
 public:
  LagrangianDriver(RoadConfig road, AccidentSet frozen, VelocityModel vel,
                   double accident_edge_smoothing = 0.0);

  double capacity(double pos) const;  // smoothed road * (optionally smoothed) accidents
  // max |d/dy c(X(y))| estimated on a fine grid over the current snapshot
  double lipschitz_estimate(std::span<const double> x, double L, int subsamples = 32) const;

  LagrangianTrajectory run(std::span<const double> x0, double L, double dt, int steps,
                           bool enforce_cfl = true, double eps_tilde = -1.0) const;

  const RoadConfig& road() const { return road_; }
  const VelocityModel& velocity() const { return vel_; }

 private:
  RoadConfig road_;
  AccidentSet frozen_;
  VelocityModel vel_;
  double edge_eps_;
};

// Lemma-schedule audit: w <= w0_max + t * L_c and w >= 1 + eps - t * L_c
// (with the floor 1 + eps_tilde valid while t <= (eps - eps_tilde) / L_c).
BoundReport check_bounds(const LagrangianTrajectory& traj, double eps, double eps_tilde,
                         double lipschitz);

// Piecewise-linear X(y) built from one snapshot; inverted monotonely to give
// the Eulerian density 1/w(Y(x)).
class EulerianReconstruction {
 public:
  EulerianReconstruction(std::span<const double> w, std::span<const double> x, double L,
                         const RoadConfig& road);
  double x_of_y(double y) const;
  double y_of_x(double pos) const;
  double density_at(double pos) const;
  double mass() const;  // integral over one period

 private:
  std::vector<double> y_;  // grid incl. closing point
  std::vector<double> x_;  // positions incl. wrap point
  std::vector<double> w_;
  double L_ = 0.0;
  RoadConfig road_;
};

}  // namespace traffic
