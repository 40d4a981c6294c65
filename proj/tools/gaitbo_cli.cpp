// Copyright 2026 The gaitbo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gaitbo command line: precompute, optimize, estimate-optimum, summarize,
// replay.
//
// Exit codes: 0 success, 2 configuration or input error, 3 run fault.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gaitbo/control/controller.h"
#include "gaitbo/control/params.h"
#include "gaitbo/errors.h"
#include "gaitbo/harness/experiment.h"
#include "gaitbo/harness/summary.h"
#include "gaitbo/metrics/cost.h"
#include "gaitbo/metrics/dog.h"
#include "gaitbo/sim/rollout.h"
#include "gaitbo/store/feature_store.h"

namespace {

using namespace gaitbo;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

struct ExperimentFlags {
  std::string config;
  std::string preset;
  std::optional<int> runs, budget, workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration, disturbance, rough;
  std::optional<std::string> store, output, cost, terrain, acquisition;
  std::vector<std::string> strategies;
  bool wall_time = false;

  void add(CLI::App* app) {
    app->add_option("-c,--config", config, "experiment config JSON");
    app->add_option("--preset", preset, "ci or full")->check(CLI::IsMember({"ci", "full"}));
    app->add_option("--runs", runs);
    app->add_option("--budget", budget, "trials per run");
    app->add_option("--workers", workers, "concurrent runs");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--duration", duration, "seconds per trial");
    app->add_option("--disturbance", disturbance, "model disturbance magnitude in [0, 0.15]");
    app->add_option("--rough", rough, "rough-ground magnitude (m)");
    app->add_option("--store", store, "feature store path");
    app->add_option("-o,--output", output, "output directory");
    app->add_option("--cost", cost, "smooth or cma");
    app->add_option("--terrain", terrain, "flat, rough, ramp-up or ramp-down");
    app->add_option("--acquisition", acquisition, "ei or ucb");
    app->add_option("--strategies", strategies, "bo-dog bo-se random cmaes cmaes-warm");
    app->add_flag("--wall-time", wall_time, "record wall time per trial");
  }

  harness::ExperimentConfig build() const {
    harness::ExperimentConfig c = preset.empty() ? harness::ExperimentConfig{} : harness::preset(preset);
    if (!config.empty()) c = harness::load_config(config, c);
    if (runs) c.runs = *runs;
    if (budget) c.budget = *budget;
    if (workers) c.workers = *workers;
    if (seed) c.master_seed = *seed;
    if (duration) c.duration = *duration;
    if (disturbance) c.disturbance = *disturbance;
    if (rough) {
      c.terrain.kind = sim::GroundKind::kRough;
      c.terrain.magnitude = *rough;
    }
    if (store) c.store_path = *store;
    if (output) c.output_dir = *output;
    if (cost) c.cost = metrics::cost_variant_from_string(*cost);
    if (terrain) c.terrain.kind = sim::ground_kind_from_string(*terrain);
    if (acquisition) c.acquisition.kind = opt::acquisition_from_string(*acquisition);
    if (!strategies.empty()) {
      c.strategies.clear();
      for (const auto& s : strategies) c.strategies.push_back(harness::strategy_from_string(s));
    }
    if (wall_time) c.record_wall_time = true;
    return c;
  }
};

int cmd_precompute(const store::PrecomputeConfig& base, const std::string& out, const std::string& csv,
                   const std::string& sim_config) {
  store::PrecomputeConfig cfg = base;
  if (!sim_config.empty()) {
    const harness::ExperimentConfig ec = harness::load_config(sim_config);
    cfg.model = ec.model;
    cfg.sim = ec.sim;
    cfg.bounds = ec.bounds;
  }
  const store::FeatureStore s = store::precompute(cfg);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  store::save(s, out);
  if (!csv.empty()) {
    std::ofstream c(csv);
    store::write_csv(s, c);
  }
  std::size_t walking = 0;
  for (Eigen::Index i = 0; i < s.phi().size(); ++i) walking += s.phi()[i] >= metrics::max_step_score();
  std::printf("wrote %s: n=%zu faults=%llu phi>=%.1f: %zu\n", out.c_str(), s.size(),
              static_cast<unsigned long long>(s.metadata().faults), metrics::max_step_score(), walking);
  return kExitOk;
}

int cmd_optimize(const harness::ExperimentConfig& cfg) {
  const auto results = harness::run_experiment(cfg);
  const harness::Summary s = harness::summarize(results);
  harness::write_summary_files(cfg.output_dir, s, "best-so-far, " + metrics::to_string(cfg.cost) + " cost");
  for (const auto& st : s.strategies) {
    std::printf("%-11s runs=%d success=%d median_best=%.6g\n", harness::to_string(st.strategy).c_str(),
                st.runs, st.successes, st.curve.empty() ? 0.0 : st.curve.back().median);
  }
  return kExitOk;
}

int cmd_estimate(const harness::ExperimentConfig& cfg, int runs, int bo_budget, int cma_budget) {
  cfg.validate();
  const harness::ExperimentContext ctx = harness::load_context(cfg);
  const harness::OptimumEstimate est = harness::estimate_optimum(cfg, ctx, runs, bo_budget, cma_budget);
  fs::create_directories(cfg.output_dir);
  std::ofstream out(fs::path(cfg.output_dir) / "optimum.json");
  out << nlohmann::json{{"cost", metrics::to_string(cfg.cost)},
                        {"optimum", est.value},
                        {"per_run", est.per_run},
                        {"bo_budget", bo_budget},
                        {"cma_budget", cma_budget}}
             .dump(2)
      << '\n';
  std::printf("estimated optimum %.6g\n", est.value);
  return kExitOk;
}

int cmd_summarize(const std::string& dir, const std::string& optimum) {
  std::optional<double> opt_value;
  fs::path opt_path = optimum.empty() ? fs::path(dir) / "optimum.json" : fs::path(optimum);
  if (fs::exists(opt_path)) {
    std::ifstream in(opt_path);
    opt_value = nlohmann::json::parse(in).at("optimum").get<double>();
  } else if (!optimum.empty()) {
    opt_value = std::stod(optimum);
  }
  const auto results = harness::load_results(dir);
  const harness::Summary s = harness::summarize(results, opt_value);
  harness::write_summary_files(dir, s, "best-so-far");
  std::printf("summarized %zu results into %s\n", results.size(), dir.c_str());
  return kExitOk;
}

struct ReplayFlags {
  std::string params, store;
  long row = -1;
  double duration = 100.0;
  std::string terrain = "flat";
  double rough = 0.04;
  std::uint64_t terrain_seed = 1;
  double disturbance = 0.0;
  std::uint64_t disturbance_seed = 1;
  std::string out = "trajectory.csv";
  std::string config;
};

int cmd_replay(const ReplayFlags& f) {
  harness::ExperimentConfig cfg;
  if (!f.config.empty()) cfg = harness::load_config(f.config);
  control::PolicyParams p;
  if (!f.params.empty()) {
    p = control::load_params(f.params);
  } else if (!f.store.empty() && f.row >= 0) {
    const store::FeatureStore s = store::load(f.store);
    if (static_cast<std::size_t>(f.row) >= s.size()) throw ParameterError("row out of range");
    const Eigen::VectorXd x = s.row(static_cast<std::size_t>(f.row));
    for (std::size_t i = 0; i < control::kParamCount; ++i) p.values[i] = x[static_cast<Eigen::Index>(i)];
  } else {
    throw ParameterError("replay needs --params or --store with --row");
  }
  const sim::GroundKind kind = sim::ground_kind_from_string(f.terrain);
  sim::GroundProfile g = kind == sim::GroundKind::kFlat    ? sim::flat_ground()
                         : kind == sim::GroundKind::kRough ? sim::rough_ground(f.terrain_seed, f.rough)
                                                           : sim::ramp_ground(kind == sim::GroundKind::kRampUp);
  const sim::LinkSet model =
      sim::build_model(cfg.model, sim::sample_disturbance(f.disturbance_seed, f.disturbance, cfg.model));
  const sim::Trajectory traj = sim::rollout(p, model, g, f.duration, cfg.sim);
  std::ofstream out(f.out);
  if (!out) throw ParameterError("cannot write " + f.out);
  sim::write_trajectory_csv(out, traj);
  const metrics::CostInputs in = metrics::cost_inputs(traj, cfg.cost_config);
  const metrics::DogScore d = metrics::dog_score(traj);
  std::printf("%s t=%.3f x=%.3f v=%.3f smooth=%.6g cma=%.6g phi=%.4g steps=%d\n",
              sim::to_string(traj.termination).c_str(), traj.end_time, traj.final_hip_x, in.v_avg,
              metrics::smooth_cost(in), metrics::cma_cost(in), d.phi, d.n);
  return kExitOk;
}

int cmd_defaults(const std::string& dir) {
  fs::create_directories(dir);
  const auto dump = [&](const std::string& name, const nlohmann::json& j) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw ParameterError("cannot write " + (fs::path(dir) / name).string());
    out << j.dump(2) << '\n';
  };
  dump("bounds.json", control::default_bounds());
  dump("model.json", sim::default_link_set());
  dump("controller.json", control::default_controller_config());
  dump("experiment.json", harness::ExperimentConfig{});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaitbo: Bayesian optimization of a neuromuscular walking controller"};
  app.require_subcommand(1);

  store::PrecomputeConfig pre;
  std::string pre_out = "data/store.bin", pre_csv, pre_config;
  auto* precompute = app.add_subcommand("precompute", "Sobol-sample the box and store phi per row");
  precompute->add_option("-n,--count", pre.n, "rows")->check(CLI::PositiveNumber);
  precompute->add_option("--scramble", pre.scramble_seed, "digital-shift seed, 0 = plain Sobol");
  precompute->add_option("--workers", pre.workers)->check(CLI::PositiveNumber);
  precompute->add_option("--duration", pre.duration, "seconds per rollout");
  precompute->add_option("--created", pre.created, "timestamp recorded in metadata");
  precompute->add_option("-o,--output", pre_out);
  precompute->add_option("--csv", pre_csv, "also export CSV");
  precompute->add_option("-c,--config", pre_config, "experiment config providing model, sim and bounds");

  ExperimentFlags opt_flags;
  auto* optimize = app.add_subcommand("optimize", "run an experiment (resumable)");
  opt_flags.add(optimize);

  ExperimentFlags est_flags;
  int est_runs = 10, est_bo = 100, est_cma = 1000;
  auto* estimate = app.add_subcommand("estimate-optimum", "optimum on the undisturbed flat-ground model");
  est_flags.add(estimate);
  estimate->add_option("--est-runs", est_runs)->check(CLI::PositiveNumber);
  estimate->add_option("--bo-budget", est_bo);
  estimate->add_option("--cma-budget", est_cma);

  std::string sum_dir = "results", sum_opt;
  auto* summarize = app.add_subcommand("summarize", "curves, success table and plot from run files");
  summarize->add_option("dir", sum_dir, "experiment output directory");
  summarize->add_option("--optimum", sum_opt, "optimum.json path or a number");

  ReplayFlags rf;
  auto* replay = app.add_subcommand("replay", "re-simulate parameters and dump the trajectory CSV");
  replay->add_option("-p,--params", rf.params, "parameter file (JSON or CSV)");
  replay->add_option("--store", rf.store);
  replay->add_option("--row", rf.row);
  replay->add_option("--duration", rf.duration);
  replay->add_option("--terrain", rf.terrain);
  replay->add_option("--rough", rf.rough);
  replay->add_option("--terrain-seed", rf.terrain_seed);
  replay->add_option("--disturbance", rf.disturbance);
  replay->add_option("--disturbance-seed", rf.disturbance_seed);
  replay->add_option("-o,--output", rf.out);
  replay->add_option("-c,--config", rf.config);

  std::string defaults_dir = "data";
  auto* defaults = app.add_subcommand("defaults", "write the built-in fixtures as JSON");
  defaults->add_option("dir", defaults_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*precompute) return cmd_precompute(pre, pre_out, pre_csv, pre_config);
    if (*optimize) return cmd_optimize(opt_flags.build());
    if (*estimate) return cmd_estimate(est_flags.build(), est_runs, est_bo, est_cma);
    if (*summarize) return cmd_summarize(sum_dir, sum_opt);
    if (*replay) return cmd_replay(rf);
    if (*defaults) return cmd_defaults(defaults_dir);
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "run fault: " << e.what() << '\n';
    return kExitFault;
  }
  return kExitConfig;
}
