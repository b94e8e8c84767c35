#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asal/solver.hpp"

namespace asal {

/// Sweep + execution plan for one method on one problem. Grids are outer
/// products over (tau0, eta, alpha) x seeds; zero-valued size fields are
/// derived from the dataset (10% of N) and a zero budget means 200 epochs.
struct ExperimentConfig {
  std::string preset;
  std::string problem = "qp";  // qp | logistic | truss
  std::string dataset_path;    // logistic only; empty selects synthetic data
  std::string encoding = "slack";
  std::string mode = "adaptive";  // "adaptive" or "fixed:<b>" / "fixed:<p>%"

  std::vector<double> alpha_grid{1.0};
  std::vector<double> eta_grid{0.1};
  std::vector<double> tau0_grid{1.0};
  std::vector<std::uint64_t> seeds{0};

  double theta_g = 0.99;
  double nu_l = 0.5;
  double theta_e_tilde = 0.0;
  std::size_t s_min = 0;
  std::size_t s_l = 0;
  std::size_t initial_sample_size = 0;
  std::size_t s_max = 1'000'000;
  std::uint64_t budget = 0;
  std::uint64_t max_outer = 100'000;
  std::uint64_t max_inner = 10'000;
  double geometric_decay = 0.0;  // > 1 switches the tau schedule to geometric

  std::uint64_t problem_seed = 42;  // constraint draws / QP instance
  std::int64_t synth_rows = 500;
  std::int64_t synth_cols = 20;

  double feas_tol = 1e-4;
  std::size_t obj_window = 5;
  std::size_t feas_window = 30;

  std::string out_dir = "out";
  int jobs = 1;
  bool verify_only = false;  // qp-verify: run the theory-check suites instead

  void validate() const;
};

/// Named reference configurations: qp-verify, logistic-mushroom,
/// logistic-australian, logistic-synthetic, truss.
ExperimentConfig make_preset(const std::string& name);

/// key=value overlay ('#' comments, comma-separated lists for grids).
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& line, std::size_t line_no);

struct RunResult {
  std::string id;  // e.g. "alpha0.1_eta0.01_tau010_seed3"
  double alpha = 0.0, eta = 0.0, tau0 = 0.0;
  std::uint64_t seed = 0;
  SolveResult solve;
  std::string trace_path;
};

struct ExperimentSummary {
  std::string preset;
  std::optional<std::size_t> best_run;
  std::string best_run_id;
  double final_feasibility = 0.0;
  double final_stationarity = 0.0;
  std::uint64_t cum_grad_evals = 0;
  std::vector<RunResult> runs;
  bool all_checks_passed = true;  // qp-verify only
};

/// Executes the full sweep (up to cfg.jobs runs concurrently), writes one
/// deterministic CSV per run plus summary.json under cfg.out_dir, and applies
/// the selection rule. Configuration errors surface before any run starts.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Solver configuration for one grid point, with derived defaults resolved
/// against the problem's population size (0 for continuous problems).
SolverConfig make_solver_config(const ExperimentConfig& cfg, double alpha, double eta,
                                double tau0, std::uint64_t seed, std::int64_t population);

/// Selection rule: among runs whose minimum feasibility error over the
/// final feas_window records is below feas_tol, pick the smallest average
/// objective over the final obj_window records; nullopt when no run
/// qualifies.
std::optional<std::size_t> select_best_run(const std::vector<SolverTrace>& traces,
                                           double feas_tol, std::size_t obj_window,
                                           std::size_t feas_window);

/// Trace CSV with a fixed header and 17-significant-digit floats; reruns with
/// an identical config and seed produce byte-identical output.
std::string trace_to_csv(const SolverTrace& trace);

/// Atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace asal
