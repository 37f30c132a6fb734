#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trafficsim/montecarlo.hpp"

namespace traffic {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int line = 0;  // 0 when not tied to a source line
  std::string message;
};

// All knobs with paper-experiment defaults; an empty config file is the
// reference setup (road [-10,10], capacity 7 with a 5-stretch at [0,5],
// 1600 vehicles, dx = 1/160, T = 10).
struct ConfigFile {
  RoadConfig road{-10.0, 10.0, {{-10.0, 7.0}, {0.0, 5.0}, {5.0, 7.0}}, 0.02};
  VelocityModel vel{};

  int n = 1600;
  std::vector<int> n_list{50, 100, 200, 400, 800, 1600};
  double vehicle_length = 0.0;  // 0: mass / n

  double dx = 1.0 / 160.0;
  std::vector<double> dx_list;  // optional refinement sweep for converge
  double dt = 0.0;              // 0: dx / 10
  double horizon = 10.0;

  EventParams events{};
  SolverKind solver = SolverKind::Godunov;
  std::uint64_t seed = 1;
  int runs = 100;
  double rho0 = 0.4;
  std::string out_dir = "out";
  int workers = 0;
  int output_stride = 0;  // snapshot every this many steps; 0: ~10 snapshots
  int series_samples = 0;

  MicroOptions micro{false, false, true};
  bool smooth_macro_capacity = false;

  std::vector<int> bounds_n_list{100, 400, 1600};
  double bounds_eps_tilde_frac = 0.5;  // eps_tilde = frac * eps
  double bounds_dt_safety = 0.9;       // fraction of the tightest dt bound
  double bounds_t_frac = 1.0;          // fraction of the horizon eps / L_c

  double step_dt() const { return dt > 0.0 ? dt : dx / 10.0; }
  double mass() const { return rho0 * road.span(); }
  double length_for(int n_vehicles) const {
    return vehicle_length > 0.0 ? vehicle_length : mass() / n_vehicles;
  }
};

// Syntax plus type errors land in diags (with 1-based line numbers); the
// returned config holds every value that did parse.
ConfigFile parse_config(const std::string& text, std::vector<Diagnostic>& diags);
ConfigFile load_config(const std::string& path, std::vector<Diagnostic>& diags);

// Semantic checks across modules (domain constraints, CFL bounds, mass
// consistency). Errors make the config unusable; warnings do not.
std::vector<Diagnostic> validate_config(const ConfigFile& cfg);

bool has_errors(const std::vector<Diagnostic>& diags);
std::string format_diagnostics(const std::vector<Diagnostic>& diags);

RunConfig to_run_config(const ConfigFile& cfg);

}  // namespace traffic
