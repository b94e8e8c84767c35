#include "asal/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "asal/libsvm.hpp"
#include "asal/problems/logistic.hpp"
#include "asal/problems/qp.hpp"
#include "asal/problems/truss.hpp"
#include "asal/verification.hpp"

namespace asal {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(std::stoull(item));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (problem != "qp" && problem != "logistic" && problem != "truss") {
    throw ConfigError("unknown problem '" + problem + "'");
  }
  if (alpha_grid.empty() || eta_grid.empty() || tau0_grid.empty()) {
    throw ConfigError("hyperparameter grids must be nonempty");
  }
  if (seeds.empty()) throw ConfigError("need at least one seed");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) throw ConfigError("seeds must be distinct");
    }
  }
  if (mode != "adaptive" && mode.rfind("fixed:", 0) != 0) {
    throw ConfigError("mode must be 'adaptive' or 'fixed:<batch>'");
  }
  if (jobs < 1) throw ConfigError("jobs must be positive");
}

ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "qp-verify") {
    cfg.problem = "qp";
    cfg.verify_only = true;
    return cfg;
  }
  if (name == "logistic-mushroom" || name == "logistic-australian" ||
      name == "logistic-synthetic") {
    cfg.problem = "logistic";
    cfg.theta_g = 0.99;
    cfg.nu_l = 0.5;
    cfg.budget = 0;  // 200 epochs
    if (name == "logistic-australian") {
      // Wider selection windows with a looser feasibility tolerance.
      cfg.feas_tol = 1e-3;
      cfg.obj_window = 10;
      cfg.feas_window = 50;
      cfg.alpha_grid = {1e-1};
      cfg.eta_grid = {1e-2, 1e-3, 1e-4};
      cfg.tau0_grid = {1e0, 1e1, 1e2};
    } else if (name == "logistic-mushroom") {
      cfg.alpha_grid = {1e-1, 1e0, 1e1};
      cfg.eta_grid = {1e-2, 1e-3, 1e-4};
      cfg.tau0_grid = {1e0, 1e1, 1e2};
    } else {
      // Tuned single point for the synthetic desk-scale problem.
      cfg.dataset_path = "";
      cfg.alpha_grid = {0.5};
      cfg.eta_grid = {0.05};
      cfg.tau0_grid = {10.0};
      cfg.s_l = 150;  // decrease gate above the controller's settling band
    }
    return cfg;
  }
  if (name == "truss") {
    cfg.problem = "truss";
    cfg.theta_g = 0.99;
    cfg.alpha_grid = {0.01};
    cfg.eta_grid = {1.0};
    cfg.tau0_grid = {10.0};
    cfg.budget = 1'000'000;
    cfg.s_min = 8;
    cfg.s_l = 32;
    cfg.initial_sample_size = 32;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

void apply_config_line(ExperimentConfig& cfg, const std::string& raw, std::size_t line_no) {
  std::string line = raw;
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  const auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
  line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
  line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
  if (line.empty()) return;

  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw ParseError(line_no, "expected key=value, got '" + line + "'");
  }
  const std::string key = line.substr(0, eq);
  const std::string value = line.substr(eq + 1);
  try {
    if (key == "problem") cfg.problem = value;
    else if (key == "dataset") cfg.dataset_path = value;
    else if (key == "encoding") cfg.encoding = value;
    else if (key == "mode") cfg.mode = value;
    else if (key == "alpha") cfg.alpha_grid = parse_double_list(value);
    else if (key == "eta") cfg.eta_grid = parse_double_list(value);
    else if (key == "tau0") cfg.tau0_grid = parse_double_list(value);
    else if (key == "seed") cfg.seeds = parse_uint_list(value);
    else if (key == "theta-g") cfg.theta_g = std::stod(value);
    else if (key == "nu-l") cfg.nu_l = std::stod(value);
    else if (key == "theta-e") cfg.theta_e_tilde = std::stod(value);
    else if (key == "s-min") cfg.s_min = std::stoull(value);
    else if (key == "s-l") cfg.s_l = std::stoull(value);
    else if (key == "s-max") cfg.s_max = std::stoull(value);
    else if (key == "initial-sample-size") cfg.initial_sample_size = std::stoull(value);
    else if (key == "budget") cfg.budget = std::stoull(value);
    else if (key == "max-outer") cfg.max_outer = std::stoull(value);
    else if (key == "max-inner") cfg.max_inner = std::stoull(value);
    else if (key == "geometric-decay") cfg.geometric_decay = std::stod(value);
    else if (key == "problem-seed") cfg.problem_seed = std::stoull(value);
    else if (key == "synth-rows") cfg.synth_rows = std::stoll(value);
    else if (key == "synth-cols") cfg.synth_cols = std::stoll(value);
    else if (key == "feas-tol") cfg.feas_tol = std::stod(value);
    else if (key == "obj-window") cfg.obj_window = std::stoull(value);
    else if (key == "feas-window") cfg.feas_window = std::stoull(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "jobs") cfg.jobs = std::stoi(value);
    else throw ParseError(line_no, "unknown key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw ParseError(line_no, "bad value '" + value + "' for key '" + key + "'");
  } catch (const std::out_of_range&) {
    throw ParseError(line_no, "value '" + value + "' out of range for key '" + key + "'");
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    apply_config_line(cfg, line, ++line_no);
  }
}

std::string trace_to_csv(const SolverTrace& trace) {
  std::string out =
      "k,t,batch_size,cum_grad_evals,feasibility_error,stationarity_error,"
      "objective_estimate,nu_t,tol_passed\n";
  for (const TraceRecord& r : trace.records) {
    out += std::to_string(r.outer);
    out += ',';
    out += std::to_string(r.inner);
    out += ',';
    out += std::to_string(r.batch_size);
    out += ',';
    out += std::to_string(r.cum_grad_evals);
    out += ',';
    out += format_double(r.feasibility_error);
    out += ',';
    out += format_double(r.stationarity_error);
    out += ',';
    out += format_double(r.objective_estimate);
    out += ',';
    out += format_double(r.nu_t);
    out += ',';
    out += r.tolerance_test_passed ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp + "'");
    out << contents;
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::size_t> select_best_run(const std::vector<SolverTrace>& traces,
                                           double feas_tol, std::size_t obj_window,
                                           std::size_t feas_window) {
  std::optional<std::size_t> best;
  double best_obj = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& recs = traces[i].records;
    if (recs.empty()) continue;
    const std::size_t fw = std::min(feas_window, recs.size());
    double min_feas = recs[recs.size() - fw].feasibility_error;
    for (std::size_t j = recs.size() - fw; j < recs.size(); ++j) {
      min_feas = std::min(min_feas, recs[j].feasibility_error);
    }
    if (!(min_feas < feas_tol)) continue;

    const std::size_t ow = std::min(obj_window, recs.size());
    double avg_obj = 0.0;
    for (std::size_t j = recs.size() - ow; j < recs.size(); ++j) {
      avg_obj += recs[j].objective_estimate;
    }
    avg_obj /= static_cast<double>(ow);
    if (!best.has_value() || avg_obj < best_obj) {
      best = i;
      best_obj = avg_obj;
    }
  }
  return best;
}

namespace {

struct RunPlan {
  double alpha, eta, tau0;
  std::uint64_t seed;
  std::string id;
};

struct ProblemBundle {
  std::shared_ptr<StochasticObjective> objective;
  std::unique_ptr<FeasibleSet> set;
  std::unique_ptr<AffineConstraint> constraint;
};

ProblemBundle build_problem(const ExperimentConfig& cfg, std::uint64_t run_seed,
                            const Dataset* shared_data) {
  ProblemBundle bundle;
  if (cfg.problem == "qp") {
    // The instance is fixed by the problem seed; per-run noise realizations
    // come from the run seed.
    const QpProblem base = random_qp_instance(cfg.problem_seed, 8, 4, 0.0);
    auto noisy = std::make_shared<QpProblem>(base.q_matrix(), base.q_linear(), base.constraint(),
                                             0.5, run_seed);
    bundle.objective = noisy;
    bundle.set = std::make_unique<FeasibleSet>(FeasibleSet::whole_space(noisy->dimension()));
    bundle.constraint = std::make_unique<AffineConstraint>(noisy->constraint());
    return bundle;
  }
  if (cfg.problem == "logistic") {
    Dataset data = shared_data != nullptr
                       ? *shared_data
                       : make_synthetic_classification(cfg.synth_rows, cfg.synth_cols,
                                                       cfg.problem_seed);
    const auto encoding =
        cfg.encoding == "slab" ? SlabEncoding::kSlabInX : SlabEncoding::kSlack;
    LogisticInstance inst = build_logistic(std::move(data), cfg.problem_seed, encoding);
    bundle.objective = inst.objective;
    bundle.set = std::make_unique<FeasibleSet>(inst.set);
    bundle.constraint = std::make_unique<AffineConstraint>(inst.constraint);
    return bundle;
  }
  const auto encoding = cfg.encoding == "capinx" ? TrussEncoding::kCapInX : TrussEncoding::kSlack;
  TrussInstance inst = build_truss(run_seed, encoding);
  bundle.objective = inst.objective;
  bundle.set = std::make_unique<FeasibleSet>(inst.set);
  bundle.constraint = std::make_unique<AffineConstraint>(inst.constraint);
  return bundle;
}

std::size_t resolve_fixed_batch(const std::string& mode, std::int64_t population) {
  const std::string spec = mode.substr(6);
  if (spec.empty()) throw ConfigError("fixed mode needs a batch size, e.g. fixed:128");
  if (spec.back() == '%') {
    const double pct = std::stod(spec.substr(0, spec.size() - 1));
    if (population <= 0) {
      throw ConfigError("percentage batch sizes need a finite-sum problem");
    }
    return std::max<std::size_t>(
        2, static_cast<std::size_t>(pct / 100.0 * static_cast<double>(population)));
  }
  return std::stoull(spec);
}

}  // namespace

SolverConfig make_solver_config(const ExperimentConfig& cfg, double alpha, double eta,
                                double tau0, std::uint64_t seed, std::int64_t population) {
  SolverConfig run_cfg;
  run_cfg.alpha = alpha;
  run_cfg.eta = eta;
  run_cfg.tolerance.tau0 = tau0;
  run_cfg.tolerance.theta_e_tilde = cfg.theta_e_tilde;
  if (cfg.geometric_decay > 1.0) {
    run_cfg.tolerance.rule = ToleranceSchedule::Rule::kGeometric;
    run_cfg.tolerance.decay = cfg.geometric_decay;
  }
  // Zero size fields derive from the dataset: 10% of N for finite sums.
  const std::size_t floor =
      population > 0 ? std::max<std::size_t>(2, static_cast<std::size_t>(population / 10)) : 8;
  run_cfg.sampler.theta_g = cfg.theta_g;
  run_cfg.sampler.nu_l = cfg.nu_l;
  run_cfg.sampler.s_min = cfg.s_min != 0 ? cfg.s_min : floor;
  run_cfg.sampler.s_l = cfg.s_l != 0 ? cfg.s_l : run_cfg.sampler.s_min;
  run_cfg.sampler.s_max =
      population > 0 ? static_cast<std::size_t>(population)
                     : cfg.s_max;
  run_cfg.initial_sample_size =
      cfg.initial_sample_size != 0 ? cfg.initial_sample_size : run_cfg.sampler.s_min;
  run_cfg.budget_gradient_evals =
      cfg.budget != 0
          ? cfg.budget
          : 200 * static_cast<std::uint64_t>(std::max<std::int64_t>(1, population));
  run_cfg.max_outer = cfg.max_outer;
  run_cfg.max_inner_per_outer = cfg.max_inner;
  run_cfg.seed = seed;
  if (cfg.mode != "adaptive") {
    run_cfg.mode = SolveMode::kFixed;
    run_cfg.fixed_batch_size = resolve_fixed_batch(cfg.mode, population);
  }
  return run_cfg;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  ExperimentSummary summary;
  summary.preset = cfg.preset.empty() ? cfg.problem : cfg.preset;

  if (cfg.verify_only) {
    const auto checks = run_qp_verification(cfg.problem_seed);
    nlohmann::json report;
    report["preset"] = summary.preset;
    for (const auto& c : checks) {
      report["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      summary.all_checks_passed = summary.all_checks_passed && c.passed;
    }
    report["all_passed"] = summary.all_checks_passed;
    write_file_atomic(cfg.out_dir + "/verification.json", report.dump(2));
    return summary;
  }

  // Datasets are parsed once, before any run starts.
  std::optional<Dataset> shared_data;
  if (cfg.problem == "logistic" && !cfg.dataset_path.empty()) {
    shared_data = parse_libsvm_file(cfg.dataset_path);
    if (shared_data->rows() == 0) {
      throw ConfigError("dataset '" + cfg.dataset_path + "' is empty");
    }
  }

  std::vector<RunPlan> plans;
  for (double tau0 : cfg.tau0_grid) {
    for (double eta : cfg.eta_grid) {
      for (double alpha : cfg.alpha_grid) {
        for (std::uint64_t seed : cfg.seeds) {
          std::ostringstream id;
          id << "alpha" << alpha << "_eta" << eta << "_tau0" << tau0 << "_seed" << seed;
          plans.push_back({alpha, eta, tau0, seed, id.str()});
        }
      }
    }
  }

  summary.runs.resize(plans.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < plans.size(); i = next.fetch_add(1)) {
      try {
        const RunPlan& plan = plans[i];
        ProblemBundle bundle =
            build_problem(cfg, plan.seed, shared_data ? &*shared_data : nullptr);
        const auto population = bundle.objective->population_size().value_or(0);
        const SolverConfig run_cfg =
            make_solver_config(cfg, plan.alpha, plan.eta, plan.tau0, plan.seed, population);

        const Vector x0 = Vector::Zero(bundle.objective->dimension());
        const Vector l0 = Vector::Zero(bundle.constraint->rows());
        SolveResult result = run_asal(*bundle.objective, *bundle.set, *bundle.constraint,
                                      run_cfg, x0, l0);

        RunResult& slot = summary.runs[i];
        slot.id = plan.id;
        slot.alpha = plan.alpha;
        slot.eta = plan.eta;
        slot.tau0 = plan.tau0;
        slot.seed = plan.seed;
        slot.trace_path = cfg.out_dir + "/" + summary.preset + "_" + cfg.mode + "_" + plan.id +
                          ".csv";
        write_file_atomic(slot.trace_path, trace_to_csv(result.trace));
        slot.solve = std::move(result);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int thread_count = std::min<int>(cfg.jobs, static_cast<int>(plans.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SolverTrace> traces;
  traces.reserve(summary.runs.size());
  for (const auto& r : summary.runs) traces.push_back(r.solve.trace);
  summary.best_run = select_best_run(traces, cfg.feas_tol, cfg.obj_window, cfg.feas_window);

  nlohmann::json report;
  report["preset"] = summary.preset;
  report["mode"] = cfg.mode;
  report["selection_rule"] = {{"feasibility_tolerance", cfg.feas_tol},
                              {"objective_window", cfg.obj_window},
                              {"feasibility_window", cfg.feas_window}};
  if (summary.best_run.has_value()) {
    const RunResult& best = summary.runs[*summary.best_run];
    const auto& recs = best.solve.trace.records;
    summary.best_run_id = best.id;
    summary.final_feasibility = recs.empty() ? 0.0 : recs.back().feasibility_error;
    summary.final_stationarity = recs.empty() ? 0.0 : recs.back().stationarity_error;
    summary.cum_grad_evals = best.solve.trace.total_grad_evals;
    report["best_run"] = best.id;
    report["final_feasibility"] = summary.final_feasibility;
    report["final_stationarity"] = summary.final_stationarity;
    report["cum_grad_evals"] = summary.cum_grad_evals;
    report["stationarity_is_estimate"] = best.solve.trace.stationarity_is_estimate;
  } else {
    report["best_run"] = "no qualifying run";
  }
  for (const auto& r : summary.runs) {
    report["runs"].push_back({{"id", r.id},
                              {"trace", r.trace_path},
                              {"grad_evals", r.solve.trace.total_grad_evals},
                              {"outer_iterations", r.solve.state.outer_iter}});
  }
  write_file_atomic(cfg.out_dir + "/summary.json", report.dump(2));
  return summary;
}

}  // namespace asal
