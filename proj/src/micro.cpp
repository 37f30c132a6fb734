#include "trafficsim/micro.hpp"

#include <algorithm>
#include <cmath>

#include "trafficsim/numeric.hpp"

namespace traffic {

double micro_density_at(std::span<const double> x, double L, const RoadConfig& road,
                        double pos) {
  int n = static_cast<int>(x.size());
  if (n == 0) return 0.0;
  double span = road.span();
  double p = pos + span * std::ceil((x[0] - pos) / span);
  if (p >= x[0] + span) p -= span;
  if (p < x[0]) p += span;
  auto it = std::upper_bound(x.begin(), x.end(), p);
  int i = static_cast<int>(it - x.begin()) - 1;
  double lead = (i + 1 < n) ? x[i + 1] : x[0] + span;
  return std::min(1.0, L / (lead - x[i]));
}

void advance_positions(std::vector<double>& x, double L, double dt,
                       const std::function<double(double)>& capacity,
                       const VelocityModel& vel, const RoadConfig& road) {
  int n = static_cast<int>(x.size());
  if (n == 0) return;
  double span = road.span();
  std::vector<double> nx(n);
  for (int i = 0; i < n; ++i) {
    double lead = (i + 1 < n) ? x[i + 1] : x[0] + span;
    double h = lead - x[i];
    double rho = std::min(1.0, L / h);
    double disp = dt * capacity(road.wrap(x[i])) * vel.v(rho);
    // Never close within L of the pre-step leader: inactive whenever
    // dt <= L / v_max, keeps ordering and positive headways otherwise.
    nx[i] = std::max(x[i], std::min(x[i] + disp, lead - L));
  }
  x.swap(nx);
  if (x[0] >= road.b) {
    for (double& v : x) v -= span;
  }
}

void advance_positions_substepped(std::vector<double>& x, double L, double dt,
                                  double bound,
                                  const std::function<double(double)>& capacity,
                                  const VelocityModel& vel, const RoadConfig& road) {
  int m = 1;
  if (dt > bound * (1.0 + 1e-12)) m = static_cast<int>(std::ceil(dt / bound));
  double sub = dt / m;
  for (int s = 0; s < m; ++s) advance_positions(x, L, sub, capacity, vel, road);
}

MicroModel::MicroModel(RoadConfig road, VelocityModel vel, EventParams par, MicroOptions opt)
    : road_(std::move(road)), vel_(vel), par_(std::move(par)), opt_(opt) {
  road_.validate();
  par_.validate();
  if (!(vel_.v_scale > 0.0)) throw std::invalid_argument("micro: v_scale must be positive");
}

MicroState MicroModel::equidistant_state(int n, double L) const {
  if (n < 2) throw std::invalid_argument("micro: need at least two vehicles");
  double h = road_.span() / n;
  if (!(L > 0.0) || L > h)
    throw std::invalid_argument("micro: vehicle length must lie in (0, span/n]");
  MicroState st;
  st.L = L;
  st.x.resize(n);
  for (int i = 0; i < n; ++i) st.x[i] = road_.a + i * h;
  return st;
}

MicroState MicroModel::state_from_profile(int n,
                                          const std::function<double(double)>& rho0) const {
  if (n < 2) throw std::invalid_argument("micro: need at least two vehicles");
  int cells = std::max(4096, 64 * n);
  double dx = road_.span() / cells;
  std::vector<double> cum(cells + 1, 0.0);
  for (int i = 0; i < cells; ++i) {
    double v = rho0(road_.a + (i + 0.5) * dx);
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("micro: initial density outside [0, 1]");
    cum[i + 1] = cum[i] + v * dx;
  }
  double mass = cum[cells];
  if (!(mass > 0.0)) throw std::invalid_argument("micro: initial density has zero mass");
  MicroState st;
  st.L = mass / n;
  st.x.resize(n);
  // place vehicle i at the (i/n)-quantile of the mass; consecutive vehicles
  // then enclose exactly mass/n = L, so headways >= L automatically
  int j = 0;
  for (int i = 0; i < n; ++i) {
    double target = mass * static_cast<double>(i) / n;
    while (j + 1 < cells && cum[j + 1] <= target) ++j;
    double seg = cum[j + 1] - cum[j];
    double frac = seg > 0.0 ? (target - cum[j]) / seg : 0.0;
    st.x[i] = road_.a + (j + frac) * dx;
  }
  return st;
}

std::vector<double> MicroModel::local_densities(const MicroState& st) const {
  int n = st.n();
  std::vector<double> rho(n);
  double span = road_.span();
  for (int i = 0; i < n; ++i) {
    double lead = (i + 1 < n) ? st.x[i + 1] : st.x[0] + span;
    double h = lead - st.x[i];
    if (h < st.L * (1.0 - 1e-12))
      throw std::runtime_error("micro: headway fell below the vehicle length");
    rho[i] = std::min(1.0, st.L / h);
  }
  return rho;
}

double MicroModel::cfl_dt(double L) const {
  return traffic::cfl_dt(L, vel_.v_scale * road_.max_factor());
}

double MicroModel::capacity_at(double pos, const AccidentSet& acc) const {
  return road_.smoothed_at(pos) * acc.factor_at(pos, road_);
}

double MicroModel::measure_capacity_at(double pos, const AccidentSet& acc) const {
  return road_.at(pos, opt_.smoothed_measure_capacity) * acc.factor_at(pos, road_);
}

void MicroModel::euler_step(MicroState& st, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("micro: dt must be positive");
  double bound = cfl_dt(st.L);
  if (dt > bound * (1.0 + 1e-12)) {
    if (opt_.enforce_cfl)
      throw std::domain_error("micro: dt exceeds the collision-free bound L/v_max");
    ++warn_.cfl_relaxed;
  }
  const AccidentSet& acc = st.acc;
  advance_positions_substepped(
      st.x, st.L, dt, bound,
      [&](double p) { return road_.smoothed_at(p) * acc.factor_at(p, road_); }, vel_, road_);
}

double MicroModel::flux_constant(const MicroState& st) const {
  int n = st.n();
  double span = road_.span();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double lead = (i + 1 < n) ? st.x[i + 1] : st.x[0] + span;
    double h = lead - st.x[i];
    double rho = std::min(1.0, st.L / h);
    sum += measure_capacity_at(road_.wrap(st.x[i]), st.acc) * rho * vel_.v(rho) * h;
  }
  return sum;
}

double MicroModel::jam_constant(const MicroState& st) const {
  auto rho = local_densities(st);
  return positive_increase_sum(rho);
}

// Index of the first vehicle past b (none: n). Road-ascending order of the
// wrapped positions is then wrap_start..n-1, 0..wrap_start-1.
static int wrap_start(const MicroState& st, double b) {
  for (int i = 0; i < st.n(); ++i)
    if (st.x[i] >= b) return i;
  return st.n();
}

// The position-measure CDFs of every model anchor at a, so one shared uniform
// lands micro and macro accidents at matching road positions (common random
// numbers). The first vehicle's interval would anchor at a moving point.
IntervalMeasure MicroModel::flux_position_measure(const MicroState& st) const {
  int n = st.n();
  double span = road_.span();
  std::vector<double> val(n);  // measure density on vehicle i's headway interval
  for (int i = 0; i < n; ++i) {
    double lead = (i + 1 < n) ? st.x[i + 1] : st.x[0] + span;
    double rho = std::min(1.0, st.L / (lead - st.x[i]));
    val[i] = measure_capacity_at(road_.wrap(st.x[i]), st.acc) * rho * vel_.v(rho);
  }
  int j = wrap_start(st, road_.b);
  IntervalMeasure m;
  auto push = [&](double left, double len, double density) {
    if (!(len > 0.0)) return;
    m.left.push_back(left);
    m.length.push_back(len);
    m.weight.push_back(density * len);
    m.total += m.weight.back();
  };
  int last = (j + n - 1) % n;
  double q0 = road_.wrap(st.x[j % n]);
  push(road_.a, q0 - road_.a, val[last]);  // seam part of the last headway
  for (int k = 0; k + 1 < n; ++k) {
    int i = (j + k) % n;
    double left = road_.wrap(st.x[i]);
    push(left, road_.wrap(st.x[(j + k + 1) % n]) - left, val[i]);
  }
  push(road_.wrap(st.x[last]), road_.b - road_.wrap(st.x[last]), val[last]);
  return m;
}

AtomMeasure MicroModel::discrete_flux_position_measure(const MicroState& st) const {
  int n = st.n();
  double span = road_.span();
  int j = wrap_start(st, road_.b);
  AtomMeasure m;
  m.atom.resize(n);
  m.weight.resize(n);
  for (int k = 0; k < n; ++k) {
    int i = (j + k) % n;
    double lead = (i + 1 < n) ? st.x[i + 1] : st.x[0] + span;
    double h = lead - st.x[i];
    double rho = std::min(1.0, st.L / h);
    m.atom[k] = road_.wrap(st.x[i]);
    m.weight[k] = measure_capacity_at(m.atom[k], st.acc) * rho * vel_.v(rho) * h;
    m.total += m.weight[k];
  }
  return m;
}

AtomMeasure MicroModel::jam_position_measure(const MicroState& st) const {
  auto rho = local_densities(st);
  int n = st.n();
  int j = wrap_start(st, road_.b);
  AtomMeasure m;
  m.atom.resize(n);
  m.weight.resize(n);
  for (int k = 0; k < n; ++k) {
    int i = (j + k) % n;
    // the piecewise density jumps up at x_i, the entry of gap i; anchoring
    // there mirrors the macro interface atoms (in a vacuum the upstream
    // vehicle can sit far from the jump, so the gap-leading anchor matters)
    double d = rho[i] - rho[(i + n - 1) % n];
    m.atom[k] = road_.wrap(st.x[i]);
    m.weight[k] = d > 0.0 ? d : 0.0;
    m.total += m.weight[k];
  }
  return m;
}

double MicroModel::sample_position_type1(const MicroState& st, double u) const {
  if (opt_.discrete_type1_measure) return discrete_flux_position_measure(st).sample(u);
  return road_.wrap(flux_position_measure(st).sample(u));
}

double MicroModel::sample_position_type2(const MicroState& st, double u) const {
  return jam_position_measure(st).sample(u);
}

double MicroModel::sample_position(const MicroState& st, double u_type, double u_pos) const {
  bool ok1 = flux_constant(st) > 0.0;
  bool ok2 = jam_constant(st) > 0.0;
  bool want1 = u_type < par_.beta;
  if (want1 ? ok1 : ok2)
    return want1 ? sample_position_type1(st, u_pos) : sample_position_type2(st, u_pos);
  if (ok1) return sample_position_type1(st, u_pos);
  if (ok2) return sample_position_type2(st, u_pos);
  throw DegenerateMeasureError("both position measures have zero mass");
}

double MicroModel::event_rate(const MicroState& st) const {
  return par_.lambda_flux * flux_constant(st) + par_.lambda_jam * jam_constant(st) +
         par_.lambda_dissolve * st.acc.count();
}

EventOutcome MicroModel::step_events(MicroState& st, double dt, const StepDraws& d) {
  double cf = flux_constant(st);
  double dj = jam_constant(st);
  double add_rate = par_.lambda_flux * cf + par_.lambda_jam * dj;
  auto s1 = [&](double u) { return sample_position_type1(st, u); };
  auto s2 = [&](double u) { return sample_position_type2(st, u); };
  EventOutcome out = sample_event(dt, add_rate, st.acc.count(), par_, d, cf > 0.0, dj > 0.0,
                                  s1, s2, warn_);
  if (out.kind == EventKind::Add) {
    st.acc.items.push_back(out.added);
  } else if (out.kind == EventKind::Remove) {
    out.removed = st.acc.items[out.removed_index];
    st.acc.items.erase(st.acc.items.begin() + out.removed_index);
  }
  st.u = out.u;
  st.l = out.l;
  euler_step(st, dt);
  st.t += dt;
  return out;
}

EventOutcome MicroModel::step(MicroState& st, double dt, DrawStream& stream) {
  return step_events(st, dt, stream.next_step());
}

double MicroModel::density_at(const MicroState& st, double pos) const {
  return micro_density_at(st.x, st.L, road_, pos);
}

}  // namespace traffic
