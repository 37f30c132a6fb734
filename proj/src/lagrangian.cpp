#include "trafficsim/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace traffic {

LagrangianState to_lagrangian(std::span<const double> x, double L, double span) {
  int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("lagrangian: need at least two vehicles");
  if (!(L > 0.0)) throw std::invalid_argument("lagrangian: vehicle length must be positive");
  LagrangianState st;
  st.L = L;
  st.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double lead = (i + 1 < n) ? x[i + 1] : x[0] + span;
    double h = lead - x[i];
    if (h < L * (1.0 - 1e-12))
      throw std::invalid_argument("lagrangian: headway below vehicle length");
    st.w[i] = h / L;
  }
  return st;
}

double tilde_v(double w, const VelocityModel& vel) {
  if (!(w > 0.0)) return 0.0;
  return vel.v(1.0 / w);
}

LagrangianCapacity::LagrangianCapacity(std::span<const double> x, double L, double span,
                                       std::function<double(double)> cap)
    : x_(x.begin(), x.end()), L_(L), span_(span), cap_(std::move(cap)) {
  if (x_.empty()) throw std::invalid_argument("lagrangian: empty position vector");
}

double LagrangianCapacity::at_grid(int i) const {
  int n = static_cast<int>(x_.size());
  int j = ((i % n) + n) % n;
  double shift = span_ * std::floor(static_cast<double>(i - j) / n);
  return cap_(x_[j] + shift);
}

double LagrangianCapacity::at(double y) const {
  int n = static_cast<int>(x_.size());
  double total = n * L_;
  y = std::clamp(y, 0.0, total);
  int j = std::min(n - 1, static_cast<int>(y / L_));
  double frac = (y - j * L_) / L_;
  double next = (j + 1 < n) ? x_[j + 1] : x_[0] + span_;
  return cap_(x_[j] + frac * (next - x_[j]));
}

std::vector<double> LagrangianCapacity::grid_values() const {
  std::vector<double> g(x_.size());
  for (size_t i = 0; i < x_.size(); ++i) g[i] = cap_(x_[i]);
  return g;
}

void lxf_lagrangian_step(LagrangianState& st, std::span<const double> cap_grid, double dt,
                         const VelocityModel& vel, bool enforce_cfl) {
  int n = st.n();
  if (static_cast<int>(cap_grid.size()) != n)
    throw std::invalid_argument("lagrangian: capacity grid size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("lagrangian: dt must be positive");
  double cmax = *std::max_element(cap_grid.begin(), cap_grid.end());
  // |d/dw (c * tilde_v)| = c * v_scale / w^2 <= c * v_scale for w >= 1
  if (enforce_cfl && dt / st.L * cmax * vel.v_scale > 1.0 + 1e-12)
    throw std::domain_error("lagrangian: dt violates the CFL bound L / (c * v_scale)");
  double lam = 0.5 * dt / st.L;
  std::vector<double> next(n);
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1 == n) ? 0 : i + 1;
    int im = (i == 0) ? n - 1 : i - 1;
    next[i] = 0.5 * (st.w[ip] + st.w[im]) +
              lam * (cap_grid[ip] * tilde_v(st.w[ip], vel) -
                     cap_grid[im] * tilde_v(st.w[im], vel));
  }
  st.w.swap(next);
  st.t += dt;
}

std::vector<double> lagrangian_position_step(std::span<const double> x, double L, double span,
                                             const std::function<double(double)>& cap,
                                             const VelocityModel& vel, double dt) {
  int n = static_cast<int>(x.size());
  std::vector<double> nx(n);
  for (int i = 0; i < n; ++i) {
    double prev = (i == 0) ? x[n - 1] - span : x[i - 1];
    double next = (i + 1 == n) ? x[0] + span : x[i + 1];
    nx[i] = 0.5 * (next + prev) + dt * cap(x[i]) * vel.v(L / (next - x[i]));
  }
  return nx;
}

LagrangianDriver::LagrangianDriver(RoadConfig road, AccidentSet frozen, VelocityModel vel,
                                   double accident_edge_smoothing)
    : road_(std::move(road)), frozen_(std::move(frozen)), vel_(vel),
      edge_eps_(accident_edge_smoothing) {
  road_.validate();
}

double LagrangianDriver::capacity(double pos) const {
  double f = edge_eps_ > 0.0 ? frozen_.smoothed_factor_at(pos, road_, edge_eps_)
                             : frozen_.factor_at(pos, road_);
  return road_.smoothed_at(pos) * f;
}

double LagrangianDriver::lipschitz_estimate(std::span<const double> x, double L,
                                            int subsamples) const {
  LagrangianCapacity cap(x, L, road_.span(), [this](double p) { return capacity(p); });
  int n = static_cast<int>(x.size());
  double total = n * L;
  int pts = n * std::max(2, subsamples);
  double dy = total / pts;
  double lip = 0.0;
  double prev = cap.at(0.0);
  for (int i = 1; i <= pts; ++i) {
    double cur = cap.at(i * dy);
    lip = std::max(lip, std::abs(cur - prev) / dy);
    prev = cur;
  }
  return lip;
}

LagrangianTrajectory LagrangianDriver::run(std::span<const double> x0, double L, double dt,
                                           int steps, bool enforce_cfl,
                                           double eps_tilde) const {
  if (steps < 1) throw std::invalid_argument("lagrangian: need at least one step");
  LagrangianTrajectory traj;
  traj.L = L;
  LagrangianState st = to_lagrangian(x0, L, road_.span());
  std::vector<double> x(x0.begin(), x0.end());

  double w_min = *std::min_element(st.w.begin(), st.w.end());
  double eps = w_min - 1.0;
  if (eps_tilde < 0.0) eps_tilde = 0.5 * eps;
  if (enforce_cfl) {
    if (!(eps > 0.0))
      throw std::domain_error("lagrangian: initial safety margin eps must be positive");
    double lc = lipschitz_estimate(x, L);
    if (lc > 0.0 && dt > (eps - eps_tilde) / lc * (1.0 + 1e-12))
      throw std::domain_error(
          "lagrangian: dt violates the car-distance bound (eps - eps_tilde) / L_c");
  }

  traj.states.push_back(st);
  traj.x.push_back(x);
  auto capfun = [this](double p) { return capacity(p); };
  for (int s = 0; s < steps; ++s) {
    LagrangianCapacity cap(x, L, road_.span(), capfun);
    std::vector<double> grid(st.n());
    for (int i = 0; i < st.n(); ++i) grid[i] = cap.at_grid(i);
    lxf_lagrangian_step(st, grid, dt, vel_, enforce_cfl);
    x = lagrangian_position_step(x, L, road_.span(), capfun, vel_, dt);
    traj.states.push_back(st);
    traj.x.push_back(x);
  }
  return traj;
}

BoundReport check_bounds(const LagrangianTrajectory& traj, double eps, double eps_tilde,
                         double lipschitz) {
  BoundReport rep;
  if (traj.states.empty()) return rep;
  const auto& w0 = traj.states.front().w;
  rep.n_vehicles = static_cast<int>(w0.size());
  rep.L = traj.L;
  rep.T = traj.states.back().t;
  rep.dt = traj.states.size() > 1 ? traj.states[1].t - traj.states[0].t : 0.0;
  rep.eps = eps;
  rep.eps_tilde = eps_tilde;
  rep.lipschitz = lipschitz;
  rep.w0_max = *std::max_element(w0.begin(), w0.end());
  rep.max_w = rep.w0_max;
  rep.min_w = *std::min_element(w0.begin(), w0.end());

  const double tol = 1e-9;
  for (const auto& st : traj.states) {
    double upper = rep.w0_max + st.t * lipschitz;
    double schedule = 1.0 + eps - st.t * lipschitz;  // lemma lower envelope
    double floor = 1.0 + eps_tilde;
    for (int i = 0; i < st.n(); ++i) {
      double w = st.w[i];
      rep.max_w = std::max(rep.max_w, w);
      rep.min_w = std::min(rep.min_w, w);
      if (w > upper + tol)
        rep.violations.push_back({st.t, i, w, upper, "upper"});
      else if (w < floor - tol && w < schedule - tol)
        rep.violations.push_back({st.t, i, w, std::min(floor, schedule), "lower"});
    }
  }
  return rep;
}

EulerianReconstruction::EulerianReconstruction(std::span<const double> w,
                                               std::span<const double> x, double L,
                                               const RoadConfig& road)
    : L_(L), road_(road) {
  int n = static_cast<int>(w.size());
  if (n < 2 || x.size() != w.size())
    throw std::invalid_argument("reconstruction: need matching w and x vectors");
  for (int i = 0; i + 1 < n; ++i)
    if (!(x[i + 1] > x[i]))
      throw std::invalid_argument("reconstruction: positions must be strictly increasing");
  x_.assign(x.begin(), x.end());
  x_.push_back(x[0] + road_.span());
  if (!(x_[n] > x_[n - 1]))
    throw std::invalid_argument("reconstruction: positions must be strictly increasing");
  w_.assign(w.begin(), w.end());
  y_.resize(n + 1);
  for (int i = 0; i <= n; ++i) y_[i] = i * L;
}

double EulerianReconstruction::x_of_y(double y) const {
  int n = static_cast<int>(w_.size());
  y = std::clamp(y, 0.0, y_.back());
  int j = std::min(n - 1, static_cast<int>(y / L_));
  double frac = (y - y_[j]) / L_;
  return x_[j] + frac * (x_[j + 1] - x_[j]);
}

double EulerianReconstruction::y_of_x(double pos) const {
  int n = static_cast<int>(w_.size());
  double span = road_.span();
  double p = pos + span * std::ceil((x_[0] - pos) / span);
  if (p >= x_[0] + span) p -= span;
  if (p < x_[0]) p += span;
  auto it = std::upper_bound(x_.begin(), x_.end(), p);
  int j = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, n - 1);
  return y_[j] + (p - x_[j]) / (x_[j + 1] - x_[j]) * L_;
}

double EulerianReconstruction::density_at(double pos) const {
  int n = static_cast<int>(w_.size());
  double span = road_.span();
  double p = pos + span * std::ceil((x_[0] - pos) / span);
  if (p >= x_[0] + span) p -= span;
  if (p < x_[0]) p += span;
  auto it = std::upper_bound(x_.begin(), x_.end(), p);
  int j = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, n - 1);
  return 1.0 / w_[j];
}

double EulerianReconstruction::mass() const {
  int n = static_cast<int>(w_.size());
  double m = 0.0;
  for (int i = 0; i < n; ++i) m += (x_[i + 1] - x_[i]) / w_[i];
  return m;
}

}  // namespace traffic
