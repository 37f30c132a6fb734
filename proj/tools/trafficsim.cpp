#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "trafficsim/simulate.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string model = "coupled";
  std::string out_dir;
  std::string solver;
  unsigned long long seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* sub, Overrides& ov, bool with_model) {
  sub->add_option("--config", ov.config_path, "configuration file (defaults used if absent)");
  sub->add_option("--seed", ov.seed, "override the base seed")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  sub->add_option("--out", ov.out_dir, "override the output directory");
  sub->add_option("--solver", ov.solver, "override the solver (godunov | lax-friedrichs)");
  if (with_model)
    sub->add_option("--model", ov.model, "model to run (micro | macro | coupled)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic traffic flow simulator (follow-the-leader / LWR with accidents)"};
  app.require_subcommand(1);
  Overrides ov;

  CLI::App* validate = app.add_subcommand("validate", "check a configuration");
  CLI::App* simulate = app.add_subcommand("simulate", "run one seeded realization");
  CLI::App* converge = app.add_subcommand("converge", "Monte Carlo error sweep");
  CLI::App* bounds = app.add_subcommand("bounds-check", "inverse-density bound audit");
  add_common(validate, ov, false);
  add_common(simulate, ov, true);
  add_common(converge, ov, false);
  add_common(bounds, ov, false);

  CLI11_PARSE(app, argc, argv);

  std::vector<traffic::Diagnostic> diags;
  traffic::ConfigFile cfg;
  if (!ov.config_path.empty()) {
    cfg = traffic::load_config(ov.config_path, diags);
  }
  if (!diags.empty()) std::cerr << traffic::format_diagnostics(diags);
  if (traffic::has_errors(diags)) return 1;

  if (ov.seed_set) cfg.seed = ov.seed;
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (!ov.solver.empty()) {
    std::string s = ov.solver;
    if (s == "godunov") {
      cfg.solver = traffic::SolverKind::Godunov;
    } else if (s == "lax-friedrichs" || s == "laxfriedrichs" || s == "lxf") {
      cfg.solver = traffic::SolverKind::LaxFriedrichs;
    } else {
      std::cerr << "error: unknown solver '" << s << "'\n";
      return 1;
    }
  }

  try {
    if (validate->parsed()) return traffic::cmd_validate(cfg, std::cout);
    if (simulate->parsed()) return traffic::cmd_simulate(cfg, ov.model, std::cout);
    if (converge->parsed()) return traffic::cmd_converge(cfg, std::cout);
    if (bounds->parsed()) return traffic::cmd_bounds_check(cfg, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
