#include "trafficsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace traffic {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p || *end != '\0')
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  long long v = std::strtoll(p, &end, 10);
  if (end == p || *end != '\0')
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(p, &end, 10);
  if (end == p || *end != '\0')
    throw std::invalid_argument("expected an unsigned integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  std::string v = lower(s);
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ','))
    if (!tok.empty()) out.push_back(parse_double(tok));
  if (out.empty()) throw std::invalid_argument("expected a list of numbers");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split(s, ','))
    if (!tok.empty()) out.push_back(static_cast<int>(parse_int(tok)));
  if (out.empty()) throw std::invalid_argument("expected a list of integers");
  return out;
}

std::vector<RoadSegment> parse_segments(const std::string& s) {
  std::vector<RoadSegment> out;
  for (const auto& tok : split(s, ',')) {
    if (tok.empty()) continue;
    auto parts = split(tok, ':');
    if (parts.size() != 2)
      throw std::invalid_argument("segment must be start:factor, got '" + tok + "'");
    out.push_back({parse_double(parts[0]), parse_double(parts[1])});
  }
  if (out.empty()) throw std::invalid_argument("expected at least one segment");
  return out;
}

Distribution parse_dist(const std::string& s) {
  std::istringstream in(s);
  std::string kind;
  in >> kind;
  kind = lower(kind);
  if (kind == "uniform") {
    double lo, hi;
    if (!(in >> lo >> hi))
      throw std::invalid_argument("uniform distribution needs 'uniform LO HI'");
    return Distribution::uniform(lo, hi);
  }
  if (kind == "discrete") {
    std::string rest;
    std::getline(in, rest);
    std::vector<double> atoms, weights;
    for (const auto& tok : split(rest, ',')) {
      if (tok.empty()) continue;
      auto parts = split(tok, ':');
      if (parts.size() != 2)
        throw std::invalid_argument("discrete atom must be value:weight, got '" + tok + "'");
      atoms.push_back(parse_double(parts[0]));
      weights.push_back(parse_double(parts[1]));
    }
    if (atoms.empty()) throw std::invalid_argument("discrete distribution has no atoms");
    return Distribution::discrete(std::move(atoms), std::move(weights));
  }
  throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

SolverKind parse_solver(const std::string& s) {
  std::string v = lower(s);
  if (v == "godunov") return SolverKind::Godunov;
  if (v == "lax-friedrichs" || v == "laxfriedrichs" || v == "lxf")
    return SolverKind::LaxFriedrichs;
  throw std::invalid_argument("unknown solver '" + s + "' (godunov | lax-friedrichs)");
}

}  // namespace

ConfigFile parse_config(const std::string& text, std::vector<Diagnostic>& diags) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;

  auto err = [&](const std::string& msg) {
    diags.push_back({Diagnostic::Severity::Error, lineno, msg});
  };
  auto warn = [&](const std::string& msg) {
    diags.push_back({Diagnostic::Severity::Warning, lineno, msg});
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        err("unterminated section header");
        continue;
      }
      section = lower(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"road",  "vehicles", "grid",  "events",
                                    "run",   "micro",    "macro", "bounds"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
            return section == k;
          }) == std::end(known))
        warn("unknown section [" + section + "]");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      err("expected key = value");
      continue;
    }
    std::string key = lower(trim(line.substr(0, eq)));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      err("expected key = value");
      continue;
    }

    try {
      bool known_key = true;
      if (section == "road") {
        if (key == "a") cfg.road.a = parse_double(val);
        else if (key == "b") cfg.road.b = parse_double(val);
        else if (key == "segments") cfg.road.segments = parse_segments(val);
        else if (key == "smoothing_width") cfg.road.smoothing_width = parse_double(val);
        else known_key = false;
      } else if (section == "vehicles") {
        if (key == "n") cfg.n = static_cast<int>(parse_int(val));
        else if (key == "n_list") cfg.n_list = parse_int_list(val);
        else if (key == "length") cfg.vehicle_length = lower(val) == "auto" ? 0.0 : parse_double(val);
        else known_key = false;
      } else if (section == "grid") {
        if (key == "dx") cfg.dx = parse_double(val);
        else if (key == "dx_list") cfg.dx_list = parse_double_list(val);
        else if (key == "dt") cfg.dt = lower(val) == "auto" ? 0.0 : parse_double(val);
        else if (key == "horizon") cfg.horizon = parse_double(val);
        else known_key = false;
      } else if (section == "events") {
        if (key == "lambda_flux") cfg.events.lambda_flux = parse_double(val);
        else if (key == "lambda_jam") cfg.events.lambda_jam = parse_double(val);
        else if (key == "lambda_dissolve") cfg.events.lambda_dissolve = parse_double(val);
        else if (key == "beta") cfg.events.beta = parse_double(val);
        else if (key == "size_dist") cfg.events.size_dist = parse_dist(val);
        else if (key == "cap_dist") cfg.events.cap_dist = parse_dist(val);
        else if (key == "c_max") cfg.events.c_max = parse_double(val);
        else if (key == "max_accidents") cfg.events.max_accidents = static_cast<int>(parse_int(val));
        else known_key = false;
      } else if (section == "run") {
        if (key == "solver") cfg.solver = parse_solver(val);
        else if (key == "seed") cfg.seed = parse_seed(val);
        else if (key == "runs") cfg.runs = static_cast<int>(parse_int(val));
        else if (key == "rho0") cfg.rho0 = parse_double(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "workers") cfg.workers = static_cast<int>(parse_int(val));
        else if (key == "output_stride") cfg.output_stride = static_cast<int>(parse_int(val));
        else if (key == "series_samples") cfg.series_samples = static_cast<int>(parse_int(val));
        else if (key == "v_scale") cfg.vel.v_scale = parse_double(val);
        else known_key = false;
      } else if (section == "micro") {
        if (key == "discrete_type1_measure") cfg.micro.discrete_type1_measure = parse_bool(val);
        else if (key == "smoothed_measure_capacity") cfg.micro.smoothed_measure_capacity = parse_bool(val);
        else if (key == "strict_cfl") cfg.micro.enforce_cfl = parse_bool(val);
        else known_key = false;
      } else if (section == "macro") {
        if (key == "smooth_road_capacity") cfg.smooth_macro_capacity = parse_bool(val);
        else known_key = false;
      } else if (section == "bounds") {
        if (key == "n_list") cfg.bounds_n_list = parse_int_list(val);
        else if (key == "eps_tilde_frac") cfg.bounds_eps_tilde_frac = parse_double(val);
        else if (key == "dt_safety") cfg.bounds_dt_safety = parse_double(val);
        else if (key == "t_frac") cfg.bounds_t_frac = parse_double(val);
        else known_key = false;
      } else if (section.empty()) {
        err("key outside any section");
        continue;
      } else {
        known_key = false;
      }
      if (!known_key) warn("unknown key '" + key + "' in section [" + section + "]");
    } catch (const std::invalid_argument& e) {
      err(std::string(e.what()) + " (key '" + key + "')");
    }
  }
  return cfg;
}

ConfigFile load_config(const std::string& path, std::vector<Diagnostic>& diags) {
  std::ifstream in(path);
  if (!in) {
    diags.push_back({Diagnostic::Severity::Error, 0, "cannot open config file '" + path + "'"});
    return ConfigFile{};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), diags);
}

std::vector<Diagnostic> validate_config(const ConfigFile& cfg) {
  std::vector<Diagnostic> diags;
  auto err = [&](const std::string& m) {
    diags.push_back({Diagnostic::Severity::Error, 0, m});
  };
  auto warn = [&](const std::string& m) {
    diags.push_back({Diagnostic::Severity::Warning, 0, m});
  };

  try {
    cfg.road.validate();
  } catch (const std::invalid_argument& e) {
    err(e.what());
  }
  try {
    cfg.events.validate();
  } catch (const std::invalid_argument& e) {
    err(e.what());
  }
  if (!(cfg.vel.v_scale > 0.0)) err("run: v_scale must be positive");
  if (cfg.n < 2) err("vehicles: n must be at least 2");
  for (int n : cfg.n_list)
    if (n < 2) err("vehicles: every n_list entry must be at least 2");
  if (cfg.runs < 1) err("run: runs must be at least 1");
  if (!(cfg.horizon > 0.0)) err("grid: horizon must be positive");
  if (!(cfg.rho0 > 0.0 && cfg.rho0 <= 1.0)) err("run: rho0 must lie in (0, 1]");
  if (cfg.workers < 0) err("run: workers must be nonnegative");
  if (cfg.output_stride < 0) err("run: output_stride must be nonnegative");
  if (cfg.series_samples < 0) err("run: series_samples must be nonnegative");

  bool road_ok = cfg.road.b > cfg.road.a;
  auto check_dx = [&](double dx, const std::string& label) {
    if (!(dx > 0.0)) {
      err("grid: " + label + " must be positive");
      return;
    }
    if (road_ok) {
      double k = cfg.road.span() / dx;
      if (std::abs(k - std::round(k)) > 1e-6 * k || k < 2.0)
        err("grid: " + label + " must divide the road length into >= 2 cells");
    }
  };
  check_dx(cfg.dx, "dx");
  for (double d : cfg.dx_list) check_dx(d, "dx_list entry");

  if (cfg.dt < 0.0) err("grid: dt must be positive or auto");

  if (road_ok && cfg.vel.v_scale > 0.0) {
    double vmax_road = cfg.road.max_factor() * cfg.vel.v_scale;
    auto check_cfl_for_dx = [&](double dx) {
      double dt = cfg.dt > 0.0 ? cfg.dt : dx / 10.0;
      if (dt > dx / vmax_road * (1.0 + 1e-12))
        err("grid: dt violates the macro CFL bound dx / (max capacity x v_scale)");
      auto micro_bound = [&](int n) {
        double L = cfg.length_for(n);
        return L / vmax_road;
      };
      std::vector<int> all = cfg.n_list;
      all.push_back(cfg.n);
      for (int n : all) {
        if (n < 2) continue;
        if (dt > micro_bound(n) * (1.0 + 1e-12)) {
          warn("grid: dt exceeds the micro collision-free bound L/v_max for n = " +
               std::to_string(n) +
               " (strict micro runs refuse; sweeps cap displacements instead)");
          break;
        }
      }
    };
    check_cfl_for_dx(cfg.dx);
    for (double d : cfg.dx_list) check_cfl_for_dx(d);

    if (cfg.vehicle_length > 0.0 && cfg.rho0 > 0.0) {
      double mass = cfg.mass();
      if (std::abs(cfg.n * cfg.vehicle_length - mass) > 1e-9 * std::max(1.0, mass))
        warn("vehicles: n x length differs from the initial mass integral (micro/macro "
             "comparisons assume consistency)");
      if (cfg.vehicle_length > cfg.road.span() / cfg.n)
        err("vehicles: length exceeds the equidistant headway span/n");
    }
  }

  for (int n : cfg.bounds_n_list)
    if (n < 2) err("bounds: every n_list entry must be at least 2");
  if (!(cfg.bounds_eps_tilde_frac > 0.0 && cfg.bounds_eps_tilde_frac < 1.0))
    err("bounds: eps_tilde_frac must lie in (0, 1)");
  if (!(cfg.bounds_dt_safety > 0.0 && cfg.bounds_dt_safety <= 1.0))
    err("bounds: dt_safety must lie in (0, 1]");
  if (!(cfg.bounds_t_frac > 0.0 && cfg.bounds_t_frac <= 1.0))
    err("bounds: t_frac must lie in (0, 1]");

  return diags;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += d.severity == Diagnostic::Severity::Error ? "error" : "warning";
    if (d.line > 0) out += ": line " + std::to_string(d.line);
    out += ": " + d.message + "\n";
  }
  return out;
}

RunConfig to_run_config(const ConfigFile& cfg) {
  RunConfig rc;
  rc.road = cfg.road;
  rc.vel = cfg.vel;
  rc.params = cfg.events;
  rc.n_list = cfg.n_list;
  rc.dx = cfg.dx;
  rc.dt = cfg.dt;
  rc.horizon = cfg.horizon;
  rc.runs = cfg.runs;
  rc.seed = cfg.seed;
  rc.solver = cfg.solver;
  rc.rho0_value = cfg.rho0;
  rc.workers = cfg.workers;
  rc.series_samples = cfg.series_samples;
  rc.micro_options = cfg.micro;
  rc.smooth_macro_capacity = cfg.smooth_macro_capacity;
  return rc;
}

}  // namespace traffic
