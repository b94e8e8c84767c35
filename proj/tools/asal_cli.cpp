// Experiment runner for the adaptive sampling augmented Lagrangian library:
// runs ASAL or fixed-batch baselines over hyperparameter grids, writes
// per-run trace CSVs and a summary JSON, and hosts the QP theory-check
// preset.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "asal/experiment.hpp"
#include "asal/verification.hpp"

int main(int argc, char** argv) {
  CLI::App app{"adaptive sampling augmented Lagrangian experiment runner"};

  std::string preset;
  std::string config_path;
  asal::ExperimentConfig cfg;
  std::vector<double> alphas, etas, tau0s;
  std::vector<std::uint64_t> seeds;

  app.add_option("--preset", preset,
                 "qp-verify | logistic-mushroom | logistic-australian | logistic-synthetic | "
                 "truss");
  app.add_option("--config", config_path, "key=value config file overlay");
  app.add_option("--problem", cfg.problem, "qp | logistic | truss");
  app.add_option("--dataset", cfg.dataset_path, "LIBSVM dataset path (logistic)");
  app.add_option("--encoding", cfg.encoding, "slack | slab (logistic), slack | capinx (truss)");
  app.add_option("--mode", cfg.mode, "adaptive, fixed:<b>, or fixed:<p>%");
  app.add_option("--alpha", alphas, "penalty parameter grid (repeatable)");
  app.add_option("--eta", etas, "step size grid (repeatable)");
  app.add_option("--tau0", tau0s, "tolerance scale grid (repeatable)");
  app.add_option("--seed", seeds, "run seeds (repeatable)");
  app.add_option("--theta-g", cfg.theta_g, "norm test parameter");
  app.add_option("--theta-e", cfg.theta_e_tilde, "tolerance test feasibility weight");
  app.add_option("--nu-l", cfg.nu_l, "sample decrease gate");
  app.add_option("--s-min", cfg.s_min, "minimum sample size (0 = derive)");
  app.add_option("--s-l", cfg.s_l, "sample decrease size gate (0 = derive)");
  app.add_option("--s-max", cfg.s_max, "sample size cap");
  app.add_option("--initial-sample-size", cfg.initial_sample_size, "|S_00| (0 = derive)");
  app.add_option("--budget", cfg.budget, "gradient evaluation budget (0 = 200 epochs)");
  app.add_option("--max-outer", cfg.max_outer, "outer iteration cap");
  app.add_option("--max-inner", cfg.max_inner, "inner iteration safeguard");
  app.add_option("--geometric-decay", cfg.geometric_decay,
                 "tau_k = tau0 a^-k instead of tau0/(k+1)");
  app.add_option("--problem-seed", cfg.problem_seed, "instance/constraint seed");
  app.add_option("--feas-tol", cfg.feas_tol, "selection rule feasibility tolerance");
  app.add_option("--obj-window", cfg.obj_window, "selection rule objective window");
  app.add_option("--feas-window", cfg.feas_window, "selection rule feasibility window");
  app.add_option("--out", cfg.out_dir, "output directory");
  app.add_option("--jobs", cfg.jobs, "concurrent runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!preset.empty()) {
      asal::ExperimentConfig base = asal::make_preset(preset);
      // Explicit flags override the preset.
      if (!app.get_option("--problem")->empty()) base.problem = cfg.problem;
      if (!app.get_option("--dataset")->empty()) base.dataset_path = cfg.dataset_path;
      if (!app.get_option("--encoding")->empty()) base.encoding = cfg.encoding;
      if (!app.get_option("--mode")->empty()) base.mode = cfg.mode;
      if (!app.get_option("--theta-g")->empty()) base.theta_g = cfg.theta_g;
      if (!app.get_option("--theta-e")->empty()) base.theta_e_tilde = cfg.theta_e_tilde;
      if (!app.get_option("--nu-l")->empty()) base.nu_l = cfg.nu_l;
      if (!app.get_option("--s-min")->empty()) base.s_min = cfg.s_min;
      if (!app.get_option("--s-l")->empty()) base.s_l = cfg.s_l;
      if (!app.get_option("--s-max")->empty()) base.s_max = cfg.s_max;
      if (!app.get_option("--initial-sample-size")->empty()) {
        base.initial_sample_size = cfg.initial_sample_size;
      }
      if (!app.get_option("--budget")->empty()) base.budget = cfg.budget;
      if (!app.get_option("--max-outer")->empty()) base.max_outer = cfg.max_outer;
      if (!app.get_option("--max-inner")->empty()) base.max_inner = cfg.max_inner;
      if (!app.get_option("--geometric-decay")->empty()) {
        base.geometric_decay = cfg.geometric_decay;
      }
      if (!app.get_option("--problem-seed")->empty()) base.problem_seed = cfg.problem_seed;
      if (!app.get_option("--feas-tol")->empty()) base.feas_tol = cfg.feas_tol;
      if (!app.get_option("--obj-window")->empty()) base.obj_window = cfg.obj_window;
      if (!app.get_option("--feas-window")->empty()) base.feas_window = cfg.feas_window;
      if (!app.get_option("--out")->empty()) base.out_dir = cfg.out_dir;
      if (!app.get_option("--jobs")->empty()) base.jobs = cfg.jobs;
      cfg = base;
    }
    if (!alphas.empty()) cfg.alpha_grid = alphas;
    if (!etas.empty()) cfg.eta_grid = etas;
    if (!tau0s.empty()) cfg.tau0_grid = tau0s;
    if (!seeds.empty()) cfg.seeds = seeds;
    if (!config_path.empty()) asal::apply_config_file(cfg, config_path);

    if (cfg.verify_only) {
      const auto checks = asal::run_qp_verification(cfg.problem_seed);
      bool all = true;
      for (const auto& c : checks) {
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all = all && c.passed;
      }
      asal::run_experiment(cfg);  // writes verification.json
      return all ? 0 : 1;
    }

    const asal::ExperimentSummary summary = asal::run_experiment(cfg);
    std::printf("%zu runs complete; traces under %s\n", summary.runs.size(),
                cfg.out_dir.c_str());
    if (summary.best_run.has_value()) {
      std::printf("best run %s: feasibility %.3e, stationarity %.3e, %llu gradient evals\n",
                  summary.best_run_id.c_str(), summary.final_feasibility,
                  summary.final_stationarity,
                  static_cast<unsigned long long>(summary.cum_grad_evals));
    } else {
      std::printf("no qualifying run under the selection rule\n");
    }
    return 0;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
