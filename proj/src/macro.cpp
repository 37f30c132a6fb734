#include "trafficsim/macro.hpp"

#include <algorithm>
#include <cmath>

#include "trafficsim/numeric.hpp"

namespace traffic {

double godunov_interface_flux(double c_left, double rho_left, double c_right,
                              double rho_right, const VelocityModel& vel) {
  double demand = vel.flux(c_left, std::min(rho_left, VelocityModel::rho_star));
  double supply = vel.flux(c_right, std::max(rho_right, VelocityModel::rho_star));
  return std::min(demand, supply);
}

MacroModel::MacroModel(RoadConfig road, VelocityModel vel, EventParams par, MacroOptions opt)
    : road_(std::move(road)), vel_(vel), par_(std::move(par)), opt_(opt) {
  road_.validate();
  par_.validate();
  if (!(vel_.v_scale > 0.0)) throw std::invalid_argument("macro: v_scale must be positive");
}

MacroState MacroModel::init_cells(int n_cells,
                                  const std::function<double(double)>& rho0) const {
  if (n_cells < 2) throw std::invalid_argument("macro: need at least two cells");
  MacroState st;
  st.dx = road_.span() / n_cells;
  st.rho.resize(n_cells);
  const int sub = 16;  // midpoint quadrature per cell
  for (int i = 0; i < n_cells; ++i) {
    double left = road_.a + i * st.dx;
    double sum = 0.0;
    for (int k = 0; k < sub; ++k) {
      double v = rho0(left + (k + 0.5) * st.dx / sub);
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("macro: initial density outside [0, 1]");
      sum += v;
    }
    st.rho[i] = sum / sub;
  }
  refresh_capacity(st);
  return st;
}

void MacroModel::refresh_capacity(MacroState& st) const {
  int k = st.k();
  st.cap.resize(k);
  for (int i = 0; i < k; ++i)
    st.cap[i] = total_capacity(cell_center(st, i), st.acc, road_, opt_.smooth_road_capacity);
}

double MacroModel::max_dt(double dx) const {
  // |d/drho f(c, rho)| <= c * v_scale for rho in [0, 1]
  return dx / (road_.max_factor() * vel_.v_scale);
}

void MacroModel::check_cfl(const MacroState& st, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("macro: dt must be positive");
  if (dt > max_dt(st.dx) * (1.0 + 1e-12))
    throw std::domain_error("macro: dt violates the CFL bound dx / (c_max * v_scale)");
}

void MacroModel::lxf_step(MacroState& st, double dt) {
  check_cfl(st, dt);
  int k = st.k();
  double lam = 0.5 * dt / st.dx;
  std::vector<double> next(k);
  for (int i = 0; i < k; ++i) {
    int ip = (i + 1 == k) ? 0 : i + 1;
    int im = (i == 0) ? k - 1 : i - 1;
    double fp = vel_.flux(st.cap[ip], st.rho[ip]);
    double fm = vel_.flux(st.cap[im], st.rho[im]);
    next[i] = 0.5 * (st.rho[ip] + st.rho[im]) - lam * (fp - fm);
  }
  for (double v : next)
    if (v < 0.0 || v > 1.0) ++warn_.out_of_range_cells;
  st.rho.swap(next);
}

void MacroModel::godunov_step(MacroState& st, double dt) {
  check_cfl(st, dt);
  int k = st.k();
  double lam = dt / st.dx;
  std::vector<double> next(k);
  // flux across the left edge of cell i
  auto left_flux = [&](int i) {
    int im = (i == 0) ? k - 1 : i - 1;
    return godunov_interface_flux(st.cap[im], st.rho[im], st.cap[i], st.rho[i], vel_);
  };
  double f_in = left_flux(0);
  for (int i = 0; i < k; ++i) {
    double f_out = left_flux(i + 1 == k ? 0 : i + 1);
    next[i] = st.rho[i] - lam * (f_out - f_in);
    f_in = f_out;
  }
  for (double& v : next) {
    if (v < 0.0) {
      if (v < -1e-12) throw std::runtime_error("macro: cell mean left [0, 1]");
      v = 0.0;
      ++warn_.clamped_cells;
    } else if (v > 1.0) {
      if (v > 1.0 + 1e-12) throw std::runtime_error("macro: cell mean left [0, 1]");
      v = 1.0;
      ++warn_.clamped_cells;
    }
  }
  st.rho.swap(next);
}

void MacroModel::solver_step(MacroState& st, double dt) {
  if (opt_.solver == SolverKind::LaxFriedrichs)
    lxf_step(st, dt);
  else
    godunov_step(st, dt);
}

double MacroModel::flux_constant(const MacroState& st) const {
  double sum = 0.0;
  int k = st.k();
  for (int i = 0; i < k; ++i) sum += st.cap[i] * st.rho[i] * (1.0 - st.rho[i]);
  return sum * st.dx * vel_.v_scale;
}

double MacroModel::jam_constant(const MacroState& st) const {
  // positive jumps at interfaces i-1/2, i.e. rho_i - rho_{i-1}, wrap included
  double sum = 0.0;
  int k = st.k();
  for (int i = 0; i < k; ++i) {
    double prev = st.rho[(i == 0) ? k - 1 : i - 1];
    double d = st.rho[i] - prev;
    if (d > 0.0) sum += d;
  }
  return sum;
}

IntervalMeasure MacroModel::flux_position_measure(const MacroState& st) const {
  int k = st.k();
  IntervalMeasure m;
  m.left.resize(k);
  m.length.resize(k);
  m.weight.resize(k);
  for (int i = 0; i < k; ++i) {
    m.left[i] = road_.a + i * st.dx;
    m.length[i] = st.dx;
    m.weight[i] = st.cap[i] * st.rho[i] * (1.0 - st.rho[i]) * st.dx * vel_.v_scale;
    m.total += m.weight[i];
  }
  return m;
}

AtomMeasure MacroModel::jam_position_measure(const MacroState& st) const {
  int k = st.k();
  AtomMeasure m;
  m.atom.resize(k);
  m.weight.resize(k);
  for (int i = 0; i < k; ++i) {
    double prev = st.rho[(i == 0) ? k - 1 : i - 1];
    double d = st.rho[i] - prev;
    m.atom[i] = road_.a + i * st.dx;  // interface x_{i-1/2}, wrap atom at a
    m.weight[i] = d > 0.0 ? d : 0.0;
    m.total += m.weight[i];
  }
  return m;
}

double MacroModel::sample_position_type1(const MacroState& st, double u) const {
  return road_.wrap(flux_position_measure(st).sample(u));
}

double MacroModel::sample_position_type2(const MacroState& st, double u) const {
  return jam_position_measure(st).sample(u);
}

double MacroModel::sample_position(const MacroState& st, double u_type, double u_pos) const {
  bool ok1 = flux_constant(st) > 0.0;
  bool ok2 = jam_constant(st) > 0.0;
  bool want1 = u_type < par_.beta;
  if (want1 ? ok1 : ok2)
    return want1 ? sample_position_type1(st, u_pos) : sample_position_type2(st, u_pos);
  if (ok1) return sample_position_type1(st, u_pos);
  if (ok2) return sample_position_type2(st, u_pos);
  throw DegenerateMeasureError("both position measures have zero mass");
}

double MacroModel::event_rate(const MacroState& st) const {
  return par_.lambda_flux * flux_constant(st) + par_.lambda_jam * jam_constant(st) +
         par_.lambda_dissolve * st.acc.count();
}

EventOutcome MacroModel::step_events(MacroState& st, double dt, const StepDraws& d) {
  double cf = flux_constant(st);
  double dj = jam_constant(st);
  double add_rate = par_.lambda_flux * cf + par_.lambda_jam * dj;
  auto s1 = [&](double u) { return sample_position_type1(st, u); };
  auto s2 = [&](double u) { return sample_position_type2(st, u); };
  EventOutcome out = sample_event(dt, add_rate, st.acc.count(), par_, d, cf > 0.0, dj > 0.0,
                                  s1, s2, warn_);
  if (out.kind == EventKind::Add) {
    st.acc.items.push_back(out.added);
    refresh_capacity(st);
  } else if (out.kind == EventKind::Remove) {
    out.removed = st.acc.items[out.removed_index];
    st.acc.items.erase(st.acc.items.begin() + out.removed_index);
    refresh_capacity(st);
  }
  st.u = out.u;
  st.l = out.l;
  solver_step(st, dt);
  st.t += dt;
  return out;
}

EventOutcome MacroModel::step(MacroState& st, double dt, DrawStream& stream) {
  return step_events(st, dt, stream.next_step());
}

double MacroModel::total_mass(const MacroState& st) const {
  return kahan_sum(st.rho) * st.dx;
}

double MacroModel::density_at(const MacroState& st, double pos) const {
  double y = road_.wrap(pos);
  int i = static_cast<int>((y - road_.a) / st.dx);
  i = std::clamp(i, 0, st.k() - 1);
  return st.rho[i];
}

}  // namespace traffic
