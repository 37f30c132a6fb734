#include "trafficsim/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "trafficsim/rng.hpp"

namespace traffic {

int RunConfig::n_cells() const {
  double k = road.span() / dx;
  long ki = std::lround(k);
  if (ki < 2 || std::abs(k - static_cast<double>(ki)) > 1e-6 * k)
    throw std::invalid_argument("run: dx must divide the road length");
  return static_cast<int>(ki);
}

int RunConfig::n_steps() const {
  double s = horizon / step_dt();
  long si = std::lround(s);
  if (si < 1) si = 1;
  return static_cast<int>(si);
}

double l1_error_snapshot(const std::function<double(double)>& f,
                         const std::function<double(double)>& g, double a, double b,
                         double dx) {
  double m = (b - a) / dx;
  long mi = std::lround(m);
  if (mi < 1 || std::abs(m - static_cast<double>(mi)) > 1e-9 * m)
    throw std::invalid_argument("l1: grid does not align with the interval");
  double sum = 0.0;
  for (long i = 0; i < mi; ++i) {
    double x = a + i * dx;
    sum += std::abs(f(x) - g(x));
  }
  return sum * dx;
}

RealizationResult run_coupled_realization(const RunConfig& cfg, std::uint64_t run_seed,
                                          int n_vehicles) {
  auto rho0 = [v = cfg.rho0_value](double) { return v; };
  MacroOptions mopt{cfg.solver, cfg.smooth_macro_capacity};
  MicroModel micro(cfg.road, cfg.vel, cfg.params, cfg.micro_options);
  MacroModel macro(cfg.road, cfg.vel, cfg.params, mopt);
  CoupledModel coupled(cfg.road, cfg.vel, cfg.params, mopt, cfg.micro_options);

  MicroState mic = micro.state_from_profile(n_vehicles, rho0);
  MacroState mac = macro.init_cells(cfg.n_cells(), rho0);
  CoupledState cpl = coupled.init(cfg.n_cells(), n_vehicles, rho0);

  double dt = cfg.step_dt();
  int steps = cfg.n_steps();
  DrawStream stream(run_seed);

  auto mic_field = [&](double x) { return micro.density_at(mic, x); };
  auto mac_field = [&](double x) { return macro.density_at(mac, x); };
  auto cpl_field = [&](double x) { return coupled.micro_density_at(cpl, x); };
  const double a = cfg.road.a, b = cfg.road.b;

  RealizationResult res;
  int stride = 0;
  if (cfg.series_samples > 0) stride = std::max(1, steps / cfg.series_samples);

  for (int s = 0; s < steps; ++s) {
    StepDraws d = stream.next_step();
    micro.step_events(mic, dt, d);
    macro.step_events(mac, dt, d);
    coupled.step(cpl, dt, d);
    if (stride > 0 && ((s + 1) % stride == 0 || s + 1 == steps)) {
      res.series_t.push_back(mac.t);
      res.series_micro.push_back(l1_error_snapshot(mic_field, mac_field, a, b, cfg.dx));
      res.series_coupled.push_back(l1_error_snapshot(cpl_field, mac_field, a, b, cfg.dx));
    }
  }
  res.err_micro = l1_error_snapshot(mic_field, mac_field, a, b, cfg.dx);
  res.err_coupled = l1_error_snapshot(cpl_field, mac_field, a, b, cfg.dx);
  return res;
}

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("TRAFFICSIM_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct Moments {
  double mean = 0.0, mean_sq = 0.0, se_mean = 0.0, se_rms = 0.0;
};

Moments sample_moments(const std::vector<double>& xs) {
  Moments m;
  size_t r = xs.size();
  if (r == 0) return m;
  for (double x : xs) {
    m.mean += x;
    m.mean_sq += x * x;
  }
  m.mean /= r;
  m.mean_sq /= r;
  if (r > 1) {
    double var = 0.0, var_sq = 0.0;
    for (double x : xs) {
      var += (x - m.mean) * (x - m.mean);
      var_sq += (x * x - m.mean_sq) * (x * x - m.mean_sq);
    }
    var /= (r - 1);
    var_sq /= (r - 1);
    m.se_mean = std::sqrt(var / r);
    double rms = std::sqrt(m.mean_sq);
    // delta method for sqrt of a sample mean
    m.se_rms = rms > 0.0 ? std::sqrt(var_sq / r) / (2.0 * rms) : 0.0;
  }
  return m;
}

}  // namespace

ErrorReport monte_carlo(const RunConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("run: need at least one realization");
  size_t n_n = cfg.n_list.size();
  ErrorReport rep;
  rep.raw_micro.assign(n_n, std::vector<double>(cfg.runs, 0.0));
  rep.raw_coupled.assign(n_n, std::vector<double>(cfg.runs, 0.0));
  std::vector<std::vector<RealizationResult>> results(n_n);
  for (auto& v : results) v.resize(cfg.runs);

  struct Task {
    size_t n_idx;
    int run;
  };
  std::vector<Task> tasks;
  tasks.reserve(n_n * cfg.runs);
  for (size_t i = 0; i < n_n; ++i)
    for (int r = 0; r < cfg.runs; ++r) tasks.push_back({i, r});

  int workers = std::min<int>(resolve_workers(cfg.workers), static_cast<int>(tasks.size()));
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;

  auto body = [&]() {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& t = tasks[idx];
      try {
        // realization seed depends on the run index only: the same event
        // stream drives every N and dx in a sweep (common random numbers)
        std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(t.run));
        results[t.n_idx][t.run] = run_coupled_realization(cfg, s, cfg.n_list[t.n_idx]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (size_t i = 0; i < n_n; ++i) {
    for (int r = 0; r < cfg.runs; ++r) {
      rep.raw_micro[i][r] = results[i][r].err_micro;
      rep.raw_coupled[i][r] = results[i][r].err_coupled;
    }
    Moments m1 = sample_moments(rep.raw_micro[i]);
    Moments m2 = sample_moments(rep.raw_coupled[i]);
    ErrorRow row;
    row.n = cfg.n_list[i];
    row.dx = cfg.dx;
    row.err1 = m1.mean;
    row.err2 = m2.mean;
    row.err3 = std::sqrt(m1.mean_sq);
    row.err4 = std::sqrt(m2.mean_sq);
    row.se1 = m1.se_mean;
    row.se2 = m2.se_mean;
    row.se3 = m1.se_rms;
    row.se4 = m2.se_rms;
    if (row.err3 < row.err1 - 1e-12 || row.err4 < row.err2 - 1e-12)
      throw std::runtime_error("run: mean exceeded root-mean-square (Jensen violated)");
    rep.rows.push_back(row);

    if (cfg.series_samples > 0 && !results[i].empty() &&
        !results[i][0].series_t.empty()) {
      size_t pts = results[i][0].series_t.size();
      for (size_t p = 0; p < pts; ++p) {
        SeriesRow sr;
        sr.n = cfg.n_list[i];
        sr.t = results[i][0].series_t[p];
        double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0;
        for (int r = 0; r < cfg.runs; ++r) {
          double e1 = results[i][r].series_micro[p];
          double e2 = results[i][r].series_coupled[p];
          s1 += e1;
          s2 += e2;
          q1 += e1 * e1;
          q2 += e2 * e2;
        }
        sr.err1 = s1 / cfg.runs;
        sr.err2 = s2 / cfg.runs;
        sr.err3 = std::sqrt(q1 / cfg.runs);
        sr.err4 = std::sqrt(q2 / cfg.runs);
        rep.series.push_back(sr);
      }
    }
  }
  return rep;
}

std::vector<std::pair<double, double>> empirical_rates(const std::vector<double>& dx,
                                                       const std::vector<double>& err) {
  if (dx.size() != err.size())
    throw std::invalid_argument("rates: dx/error size mismatch");
  for (double e : err)
    if (!(e > 0.0)) throw std::invalid_argument("rates: errors must be positive");
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i < dx.size(); ++i) {
    for (size_t j = 0; j < dx.size(); ++j) {
      if (std::abs(dx[j] - 2.0 * dx[i]) <= 1e-9 * dx[i]) {
        out.emplace_back(dx[i], std::log2(err[j] / err[i]));
        break;
      }
    }
  }
  return out;
}

}  // namespace traffic
