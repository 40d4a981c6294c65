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

#ifndef GAITBO_HARNESS_EXPERIMENT_H_
#define GAITBO_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gaitbo/control/params.h"
#include "gaitbo/metrics/cost.h"
#include "gaitbo/opt/bo.h"
#include "gaitbo/opt/run.h"
#include "gaitbo/sim/model.h"
#include "gaitbo/sim/rollout.h"
#include "gaitbo/sim/terrain.h"
#include "gaitbo/store/feature_store.h"

namespace gaitbo::harness {

enum class Strategy { kBoDog, kBoSe, kRandom, kCmaes, kCmaesWarm };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);
const std::vector<Strategy>& all_strategies();

struct TerrainSpec {
  sim::GroundKind kind = sim::GroundKind::kRough;
  double magnitude = 0.04;  // m, rough only
  double cell_width = 0.4;  // m, rough only
  double max_grade = 0.2;   // ramps only
};

struct ExperimentConfig {
  metrics::CostVariant cost = metrics::CostVariant::kSmooth;
  TerrainSpec terrain{};
  double disturbance = 0.10;
  std::vector<Strategy> strategies = all_strategies();
  int runs = 10;
  int budget = 30;
  double duration = 100.0;  // s per trial
  std::string store_path;
  std::string output_dir = "results";
  std::uint64_t master_seed = 1;
  int workers = 1;
  // BO
  opt::AcquisitionSpec acquisition{};
  bool fit_hyperparams = true;
  bool standardize_phi = true;
  // CMA-ES
  double cmaes_sigma = 0.3;       // fraction of the box span
  double warm_sigma = 0.05;
  std::size_t warm_k = 100;
  bool record_wall_time = false;
  store::StalenessPolicy staleness = store::StalenessPolicy::kWarn;
  // Fixtures
  control::ParamBounds bounds = control::default_bounds();
  sim::LinkSet model = sim::default_link_set();
  sim::SimConfig sim = sim::default_sim_config();
  metrics::CostConfig cost_config{};

  void validate() const;
};

// "ci": 10 runs x 30 trials, rough +-4 cm, 1,000-point store.
// "full": 50 runs x 100 trials, rough +-8 cm, 100,000-point store.
ExperimentConfig preset(const std::string& name);

void to_json(nlohmann::json& j, const ExperimentConfig& c);
// Missing fields keep the values already in c.
void merge_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// Seeds for run r: everything random in a run descends from run_seed.
struct RunSeeds {
  std::uint64_t run = 0;
  std::uint64_t disturbance = 0;
  std::uint64_t terrain = 0;
  std::uint64_t strategy(Strategy s) const;
};
RunSeeds run_seeds(std::uint64_t master_seed, int run_id);

// Per-run conditions shared by every strategy.
struct RunConditions {
  int run_id = 0;
  RunSeeds seeds;
  sim::Disturbance disturbance;
  sim::GroundProfile ground;
  sim::LinkSet model;
};
RunConditions run_conditions(const ExperimentConfig& cfg, int run_id);

struct TrialOutcome {
  double cost = 0.0;
  bool walked = false;  // completed the trial duration without falling
  metrics::CostInputs inputs;
};

TrialOutcome evaluate_params(const Eigen::VectorXd& x, const sim::LinkSet& model,
                             const sim::GroundProfile& ground, double duration,
                             metrics::CostVariant cost, const sim::SimConfig& sim,
                             const metrics::CostConfig& cc = {});

struct RunResult {
  int run_id = 0;
  Strategy strategy = Strategy::kRandom;
  std::uint64_t seed = 0;
  sim::Disturbance disturbance;
  std::uint64_t terrain_seed = 0;
  opt::OptRun history;
  std::vector<bool> walked;  // per trial
  bool success = false;      // best params walk the full duration
  double best_cost = 0.0;
  int first_success = -1;    // 1-based trial of the first walking evaluation

  bool operator==(const RunResult&) const = default;
};

nlohmann::json result_to_json(const RunResult& r);
RunResult result_from_json(const nlohmann::json& j);

// Shared, read-only inputs for one experiment.
struct ExperimentContext {
  std::shared_ptr<const store::FeatureStore> store;  // required for grid strategies
};

ExperimentContext load_context(const ExperimentConfig& cfg);

RunResult run_strategy(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                       const RunConditions& cond, Strategy s);

// Runs every (run, strategy) pair not already complete in output_dir. Each
// pair persists to runs/run_NNN_<strategy>.jsonl (one trial per line) and a
// .result.json marker written last; partial pairs are recomputed.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg);
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, const ExperimentContext& ctx);

std::string run_file_stem(int run_id, Strategy s);

// Reads every finished pair in output_dir/runs, ordered by run then strategy.
std::vector<RunResult> load_results(const std::string& output_dir);

struct OptimumEstimate {
  double value = 0.0;
  std::vector<double> per_run;  // min over strategies for each run
};

// Undisturbed model on flat ground: BO with the DoG kernel for bo_budget
// trials and CMA-ES for cma_budget trials, per run; the minimum over all.
OptimumEstimate estimate_optimum(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                                 int runs, int bo_budget, int cma_budget);

}  // namespace gaitbo::harness

#endif  // GAITBO_HARNESS_EXPERIMENT_H_
