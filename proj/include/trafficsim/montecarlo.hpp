#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "trafficsim/coupled.hpp"

namespace traffic {

struct RunConfig {
  RoadConfig road;
  VelocityModel vel;
  EventParams params;
  std::vector<int> n_list{50, 100, 200, 400, 800, 1600};
  double dx = 1.0 / 160.0;
  double dt = 0.0;  // <= 0: dx / 10
  double horizon = 10.0;
  int runs = 100;
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::Godunov;
  double rho0_value = 0.4;
  int workers = 0;         // <= 0: env override, then hardware concurrency
  int series_samples = 0;  // time-resolved error samples per run (0 = off)
  MicroOptions micro_options{false, false, false};  // relaxed CFL for sweeps
  bool smooth_macro_capacity = false;

  double step_dt() const { return dt > 0.0 ? dt : dx / 10.0; }
  int n_cells() const;  // validated span / dx
  int n_steps() const;
};

struct RealizationResult {
  double err_micro = 0.0;    // L1(micro, macro) at t = T
  double err_coupled = 0.0;  // L1(coupled micro, macro) at t = T
  std::vector<double> series_t;
  std::vector<double> series_micro;
  std::vector<double> series_coupled;
};

struct ErrorRow {
  int n = 0;
  double dx = 0.0;
  double err1 = 0.0, err2 = 0.0, err3 = 0.0, err4 = 0.0;
  double se1 = 0.0, se2 = 0.0, se3 = 0.0, se4 = 0.0;
};

struct SeriesRow {
  int n = 0;
  double t = 0.0;
  double err1 = 0.0, err2 = 0.0, err3 = 0.0, err4 = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;                  // one per N
  std::vector<std::vector<double>> raw_micro;  // [n_index][run]
  std::vector<std::vector<double>> raw_coupled;
  std::vector<SeriesRow> series;
};

// Left-rectangular L1 distance on the grid a + i*dx, i = 0..(b-a)/dx - 1;
// exact for fields that are piecewise constant on the grid cells.
double l1_error_snapshot(const std::function<double(double)>& f,
                         const std::function<double(double)>& g, double a, double b,
                         double dx);

// One common-random-number realization: micro, macro and coupled advance on
// the shared time grid, every model consuming the identical per-step draws.
RealizationResult run_coupled_realization(const RunConfig& cfg, std::uint64_t run_seed,
                                          int n_vehicles);

ErrorReport monte_carlo(const RunConfig& cfg);

// rate(dx) = log2(err(2 dx) / err(dx)) for every dx whose doubling is present
std::vector<std::pair<double, double>> empirical_rates(const std::vector<double>& dx,
                                                       const std::vector<double>& err);

int resolve_workers(int configured);  // env TRAFFICSIM_WORKERS, then hardware

}  // namespace traffic
