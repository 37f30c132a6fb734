#include "trafficsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "trafficsim/csvio.hpp"
#include "trafficsim/lagrangian.hpp"

namespace traffic {

namespace {

int cells_for(const ConfigFile& cfg, double dx) {
  double k = cfg.road.span() / dx;
  long ki = std::lround(k);
  if (ki < 2 || std::abs(k - static_cast<double>(ki)) > 1e-6 * k)
    throw std::invalid_argument("grid: dx must divide the road length");
  return static_cast<int>(ki);
}

int steps_for(const ConfigFile& cfg) {
  long s = std::lround(cfg.horizon / cfg.step_dt());
  return static_cast<int>(std::max(1L, s));
}

std::string out_path(const ConfigFile& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void append_event(std::vector<AccidentLogEntry>& log, const EventOutcome& out, double t,
                  int count_after) {
  if (out.kind == EventKind::Add) {
    log.push_back({t, +1, count_after, out.added.p, out.added.s, out.added.c});
  } else if (out.kind == EventKind::Remove) {
    log.push_back({t, -1, out.l, out.removed.p, out.removed.s, out.removed.c});
  }
}

int require_valid(const ConfigFile& cfg, std::ostream& log) {
  auto diags = validate_config(cfg);
  if (!diags.empty()) log << format_diagnostics(diags);
  return has_errors(diags) ? 1 : 0;
}

}  // namespace

int cmd_validate(const ConfigFile& cfg, std::ostream& out) {
  auto diags = validate_config(cfg);
  out << format_diagnostics(diags);
  if (has_errors(diags)) return 1;
  out << "ok\n";
  return 0;
}

int cmd_simulate(const ConfigFile& cfg, const std::string& model, std::ostream& log) {
  if (int rc = require_valid(cfg, log)) return rc;
  double dt = cfg.step_dt();
  int steps = steps_for(cfg);
  int stride = cfg.output_stride > 0 ? cfg.output_stride : std::max(1, steps / 10);
  auto rho0 = [v = cfg.rho0](double) { return v; };
  std::vector<AccidentLogEntry> events;

  if (model == "micro") {
    MicroModel mm(cfg.road, cfg.vel, cfg.events, cfg.micro);
    MicroState st = mm.state_from_profile(cfg.n, rho0);
    CsvWriter traj(out_path(cfg, "trajectory.csv"));
    traj.cell("t").cell("vehicle_index").cell("position");
    traj.end_row();
    DrawStream stream(cfg.seed);
    auto snapshot = [&]() {
      for (int i = 0; i < st.n(); ++i) {
        traj.cell(st.t).cell(i + 1).cell(cfg.road.wrap(st.x[i]));
        traj.end_row();
      }
    };
    snapshot();
    for (int s = 0; s < steps; ++s) {
      EventOutcome out = mm.step(st, dt, stream);
      append_event(events, out, st.t, st.acc.count());
      if ((s + 1) % stride == 0 || s + 1 == steps) snapshot();
    }
    write_accident_log(out_path(cfg, "accidents.csv"), events);
    log << "wrote " << out_path(cfg, "trajectory.csv") << " and accidents.csv ("
        << events.size() << " events)\n";
    return 0;
  }

  if (model == "macro") {
    MacroModel mm(cfg.road, cfg.vel, cfg.events, {cfg.solver, cfg.smooth_macro_capacity});
    MacroState st = mm.init_cells(cells_for(cfg, cfg.dx), rho0);
    CsvWriter dens(out_path(cfg, "density.csv"));
    dens.cell("t").cell("cell_center").cell("rho");
    dens.end_row();
    DrawStream stream(cfg.seed);
    auto snapshot = [&]() {
      for (int i = 0; i < st.k(); ++i) {
        dens.cell(st.t).cell(mm.cell_center(st, i)).cell(st.rho[i]);
        dens.end_row();
      }
    };
    snapshot();
    for (int s = 0; s < steps; ++s) {
      EventOutcome out = mm.step(st, dt, stream);
      append_event(events, out, st.t, st.acc.count());
      if ((s + 1) % stride == 0 || s + 1 == steps) snapshot();
    }
    write_accident_log(out_path(cfg, "accidents.csv"), events);
    log << "wrote " << out_path(cfg, "density.csv") << " and accidents.csv ("
        << events.size() << " events)\n";
    return 0;
  }

  if (model == "coupled") {
    CoupledModel cm(cfg.road, cfg.vel, cfg.events, {cfg.solver, cfg.smooth_macro_capacity},
                    cfg.micro);
    CoupledState st = cm.init(cells_for(cfg, cfg.dx), cfg.n, rho0);
    CsvWriter joint(out_path(cfg, "joint.csv"));
    joint.cell("t").cell("x").cell("rho_micro").cell("rho_macro");
    joint.end_row();
    DrawStream stream(cfg.seed);
    auto snapshot = [&]() {
      for (int i = 0; i < st.macro.k(); ++i) {
        double x = cm.macro().cell_center(st.macro, i);
        joint.cell(st.t()).cell(x).cell(cm.micro_density_at(st, x)).cell(st.macro.rho[i]);
        joint.end_row();
      }
    };
    snapshot();
    for (int s = 0; s < steps; ++s) {
      EventOutcome out = cm.step(st, dt, stream);
      append_event(events, out, st.t(), st.macro.acc.count());
      if ((s + 1) % stride == 0 || s + 1 == steps) snapshot();
    }
    write_accident_log(out_path(cfg, "accidents.csv"), events);
    log << "wrote " << out_path(cfg, "joint.csv") << " and accidents.csv ("
        << events.size() << " events)\n";
    return 0;
  }

  log << "error: unknown model '" << model << "' (micro | macro | coupled)\n";
  return 1;
}

int cmd_converge(const ConfigFile& cfg, std::ostream& log) {
  if (int rc = require_valid(cfg, log)) return rc;
  RunConfig run = to_run_config(cfg);
  run.micro_options.enforce_cfl = false;  // sweeps may pass the collision bound

  std::vector<double> dxs = cfg.dx_list.empty() ? std::vector<double>{cfg.dx} : cfg.dx_list;
  ErrorReport all;
  for (double dx : dxs) {
    run.dx = dx;
    ErrorReport rep = monte_carlo(run);
    for (const auto& row : rep.rows) all.rows.push_back(row);
    for (const auto& sr : rep.series) all.series.push_back(sr);
  }
  write_error_report(out_path(cfg, "report.csv"), all);

  std::vector<std::tuple<double, std::string, double>> rates;
  if (dxs.size() > 1 && !run.n_list.empty()) {
    int n_ref = run.n_list.back();
    const char* names[4] = {"err1", "err2", "err3", "err4"};
    for (int m = 0; m < 4; ++m) {
      std::vector<double> errs;
      bool ok = true;
      for (double dx : dxs) {
        auto it = std::find_if(all.rows.begin(), all.rows.end(), [&](const ErrorRow& r) {
          return r.n == n_ref && std::abs(r.dx - dx) <= 1e-12;
        });
        if (it == all.rows.end()) {
          ok = false;
          break;
        }
        double e = m == 0 ? it->err1 : m == 1 ? it->err2 : m == 2 ? it->err3 : it->err4;
        if (!(e > 0.0)) ok = false;
        errs.push_back(e);
      }
      if (!ok) continue;
      for (const auto& [dx, rate] : empirical_rates(dxs, errs))
        rates.emplace_back(dx, names[m], rate);
    }
  }
  write_rates(out_path(cfg, "rates.csv"), rates);
  if (!all.series.empty()) write_series(out_path(cfg, "series.csv"), all.series);

  for (const auto& r : all.rows)
    log << "n=" << r.n << " dx=" << r.dx << " err1=" << r.err1 << " err2=" << r.err2
        << " err3=" << r.err3 << " err4=" << r.err4 << "\n";
  log << "wrote " << out_path(cfg, "report.csv") << "\n";
  return 0;
}

int cmd_bounds_check(const ConfigFile& cfg, std::ostream& log) {
  if (int rc = require_valid(cfg, log)) return rc;
  LagrangianDriver driver(cfg.road, AccidentSet{}, cfg.vel);
  std::vector<BoundReport> reports;
  bool all_ok = true;

  for (int n : cfg.bounds_n_list) {
    double L = cfg.length_for(n);
    double h = cfg.road.span() / n;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = cfg.road.a + i * h;

    double eps = h / L - 1.0;
    if (!(eps > 0.0))
      throw std::runtime_error("bounds: initial inverse densities give no safety margin");
    double eps_tilde = cfg.bounds_eps_tilde_frac * eps;
    double lc = driver.lipschitz_estimate(x, L);

    double t_max = lc > 0.0 ? eps / lc : cfg.horizon;
    double t_run = cfg.bounds_t_frac * std::min(cfg.horizon, t_max);
    double dt_cfl = L / (cfg.road.max_factor() * cfg.vel.v_scale);
    double dt_car = lc > 0.0 ? (eps - eps_tilde) / lc : dt_cfl;
    double dt = cfg.bounds_dt_safety * std::min(dt_cfl, dt_car);
    int steps = std::max(1, static_cast<int>(std::ceil(t_run / dt)));
    dt = t_run / steps;

    auto traj = driver.run(x, L, dt, steps, true, eps_tilde);
    BoundReport rep = check_bounds(traj, eps, eps_tilde, lc);
    log << "n=" << n << " T=" << rep.T << " dt=" << rep.dt << " L_c=" << lc
        << " w_range=[" << rep.min_w << ", " << rep.max_w << "] violations="
        << rep.violations.size() << "\n";
    if (!rep.ok()) all_ok = false;
    reports.push_back(std::move(rep));
  }
  write_bounds_report(out_path(cfg, "bounds.json"), reports);
  log << "wrote " << out_path(cfg, "bounds.json") << "\n";
  return all_ok ? 0 : 2;
}

}  // namespace traffic
