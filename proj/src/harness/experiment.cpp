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

#include "gaitbo/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "gaitbo/errors.h"
#include "gaitbo/gp/kernel.h"
#include "gaitbo/opt/cmaes.h"
#include "gaitbo/opt/random_search.h"
#include "gaitbo/opt/warm_start.h"
#include "gaitbo/random.h"

namespace gaitbo::harness {

namespace fs = std::filesystem;

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kRunStream = 0x52554e;         // "RUN"
constexpr std::uint64_t kDisturbanceStream = 0x444953;  // "DIS"
constexpr std::uint64_t kTerrainStream = 0x544552;      // "TER"
constexpr std::uint64_t kStrategyStream = 0x535452;     // "STR"
constexpr std::uint64_t kOptimumStream = 0x4f5054;      // "OPT"
constexpr std::uint64_t kColdStartStream = 0x434f4c;    // "COL"

opt::Box make_box(const control::ParamBounds& b) {
  opt::Box box;
  box.lower = Eigen::Map<const Eigen::VectorXd>(b.lower.data(), control::kParamCount);
  box.upper = Eigen::Map<const Eigen::VectorXd>(b.upper.data(), control::kParamCount);
  return box;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kBoDog:
      return "bo-dog";
    case Strategy::kBoSe:
      return "bo-se";
    case Strategy::kRandom:
      return "random";
    case Strategy::kCmaes:
      return "cmaes";
    case Strategy::kCmaesWarm:
      return "cmaes-warm";
  }
  return "random";
}

Strategy strategy_from_string(const std::string& s) {
  for (Strategy k : all_strategies()) {
    if (to_string(k) == s) return k;
  }
  throw ParameterError("unknown strategy: " + s);
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> kAll = {Strategy::kBoDog, Strategy::kBoSe, Strategy::kRandom,
                                             Strategy::kCmaes, Strategy::kCmaesWarm};
  return kAll;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ParameterError("runs must be at least 1");
  if (budget < 1) throw ParameterError("budget must be at least 1");
  if (!(duration > 0.0)) throw ParameterError("trial duration must be positive");
  if (!(disturbance >= 0.0 && disturbance <= sim::kMaxDisturbance)) {
    throw ParameterError("disturbance magnitude must lie in [0, 0.15]");
  }
  if (strategies.empty()) throw ParameterError("no strategies configured");
  if (workers < 1) throw ParameterError("workers must be at least 1");
  if (!(cmaes_sigma > 0.0 && warm_sigma > 0.0)) throw ParameterError("CMA-ES sigma must be positive");
  if (warm_k < 1) throw ParameterError("warm_k must be at least 1");
  if (terrain.kind == sim::GroundKind::kRough && !(terrain.magnitude >= 0.0 && terrain.cell_width > 0.0)) {
    throw ParameterError("rough terrain needs magnitude >= 0 and cell width > 0");
  }
  acquisition.validate();
  bounds.validate();
  const bool needs_store = std::any_of(strategies.begin(), strategies.end(), [](Strategy s) {
    return s == Strategy::kBoDog || s == Strategy::kBoSe || s == Strategy::kCmaesWarm;
  });
  if (needs_store && store_path.empty()) throw ParameterError("strategies need a feature store path");
  if (needs_store && !fs::exists(store_path)) throw ParameterError("feature store not found: " + store_path);
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "ci") {
    c.store_path = "data/store_ci.bin";
    return c;
  }
  if (name == "full") {
    c.runs = 50;
    c.budget = 100;
    c.terrain.magnitude = 0.08;
    c.disturbance = 0.15;
    c.store_path = "data/store_full.bin";
    return c;
  }
  throw ParameterError("unknown preset: " + name);
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  std::vector<std::string> strategies;
  for (Strategy s : c.strategies) strategies.push_back(to_string(s));
  j = {{"cost", metrics::to_string(c.cost)},
       {"terrain",
        {{"kind", sim::to_string(c.terrain.kind)},
         {"magnitude", c.terrain.magnitude},
         {"cell_width", c.terrain.cell_width},
         {"max_grade", c.terrain.max_grade}}},
       {"disturbance", c.disturbance},
       {"strategies", strategies},
       {"runs", c.runs},
       {"budget", c.budget},
       {"duration", c.duration},
       {"store", c.store_path},
       {"output", c.output_dir},
       {"master_seed", c.master_seed},
       {"workers", c.workers},
       {"bo",
        {{"acquisition", opt::to_string(c.acquisition.kind)},
         {"weight", c.acquisition.weight},
         {"fit_hyperparams", c.fit_hyperparams},
         {"standardize_phi", c.standardize_phi}}},
       {"cmaes", {{"sigma", c.cmaes_sigma}, {"warm_sigma", c.warm_sigma}, {"warm_k", c.warm_k}}},
       {"record_wall_time", c.record_wall_time},
       {"staleness", c.staleness == store::StalenessPolicy::kFail   ? "fail"
                     : c.staleness == store::StalenessPolicy::kWarn ? "warn"
                                                                    : "ignore"},
       {"target_speed", c.cost_config.target_speed},
       {"bounds", c.bounds},
       {"model", c.model},
       {"sim", c.sim}};
}

void merge_json(const nlohmann::json& j, ExperimentConfig& c) {
  try {
    if (j.contains("preset")) c = preset(j["preset"].get<std::string>());
    if (j.contains("cost")) c.cost = metrics::cost_variant_from_string(j["cost"].get<std::string>());
    if (j.contains("terrain")) {
      const auto& t = j["terrain"];
      if (t.contains("kind")) c.terrain.kind = sim::ground_kind_from_string(t["kind"].get<std::string>());
      c.terrain.magnitude = t.value("magnitude", c.terrain.magnitude);
      c.terrain.cell_width = t.value("cell_width", c.terrain.cell_width);
      c.terrain.max_grade = t.value("max_grade", c.terrain.max_grade);
    }
    c.disturbance = j.value("disturbance", c.disturbance);
    if (j.contains("strategies")) {
      c.strategies.clear();
      for (const auto& s : j["strategies"]) c.strategies.push_back(strategy_from_string(s.get<std::string>()));
    }
    c.runs = j.value("runs", c.runs);
    c.budget = j.value("budget", c.budget);
    c.duration = j.value("duration", c.duration);
    c.store_path = j.value("store", c.store_path);
    c.output_dir = j.value("output", c.output_dir);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.workers = j.value("workers", c.workers);
    if (j.contains("bo")) {
      const auto& b = j["bo"];
      if (b.contains("acquisition")) {
        c.acquisition.kind = opt::acquisition_from_string(b["acquisition"].get<std::string>());
      }
      c.acquisition.weight = b.value("weight", c.acquisition.weight);
      c.fit_hyperparams = b.value("fit_hyperparams", c.fit_hyperparams);
      c.standardize_phi = b.value("standardize_phi", c.standardize_phi);
    }
    if (j.contains("cmaes")) {
      const auto& m = j["cmaes"];
      c.cmaes_sigma = m.value("sigma", c.cmaes_sigma);
      c.warm_sigma = m.value("warm_sigma", c.warm_sigma);
      c.warm_k = m.value("warm_k", c.warm_k);
    }
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
    if (j.contains("staleness")) {
      const std::string s = j["staleness"].get<std::string>();
      if (s == "fail") {
        c.staleness = store::StalenessPolicy::kFail;
      } else if (s == "warn") {
        c.staleness = store::StalenessPolicy::kWarn;
      } else if (s == "ignore") {
        c.staleness = store::StalenessPolicy::kIgnore;
      } else {
        throw ParameterError("staleness must be fail, warn or ignore");
      }
    }
    c.cost_config.target_speed = j.value("target_speed", c.cost_config.target_speed);
    if (j.contains("bounds")) c.bounds = j["bounds"].get<control::ParamBounds>();
    if (j.contains("model")) c.model = j["model"].get<sim::LinkSet>();
    if (j.contains("sim")) c.sim = j["sim"].get<sim::SimConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad experiment config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("config " + path + " is not valid JSON: " + e.what());
  }
  merge_json(j, base);
  return base;
}

std::uint64_t RunSeeds::strategy(Strategy s) const {
  return derive_seed(run, kStrategyStream, static_cast<std::uint64_t>(s));
}

RunSeeds run_seeds(std::uint64_t master_seed, int run_id) {
  RunSeeds s;
  s.run = derive_seed(master_seed, kRunStream, static_cast<std::uint64_t>(run_id));
  s.disturbance = derive_seed(s.run, kDisturbanceStream);
  s.terrain = derive_seed(s.run, kTerrainStream);
  return s;
}

RunConditions run_conditions(const ExperimentConfig& cfg, int run_id) {
  RunConditions c;
  c.run_id = run_id;
  c.seeds = run_seeds(cfg.master_seed, run_id);
  c.disturbance = sim::sample_disturbance(c.seeds.disturbance, cfg.disturbance, cfg.model);
  c.model = sim::build_model(cfg.model, c.disturbance);
  switch (cfg.terrain.kind) {
    case sim::GroundKind::kFlat:
      c.ground = sim::flat_ground();
      break;
    case sim::GroundKind::kRough:
      c.ground = sim::rough_ground(c.seeds.terrain, cfg.terrain.magnitude, cfg.terrain.cell_width);
      break;
    case sim::GroundKind::kRampUp:
      c.ground = sim::ramp_ground(true, cfg.terrain.max_grade);
      break;
    case sim::GroundKind::kRampDown:
      c.ground = sim::ramp_ground(false, cfg.terrain.max_grade);
      break;
  }
  return c;
}

TrialOutcome evaluate_params(const Eigen::VectorXd& x, const sim::LinkSet& model,
                             const sim::GroundProfile& ground, double duration,
                             metrics::CostVariant cost, const sim::SimConfig& sim,
                             const metrics::CostConfig& cc) {
  control::PolicyParams p;
  if (x.size() != static_cast<Eigen::Index>(control::kParamCount)) {
    throw ParameterError("parameter vector must have 16 entries");
  }
  for (std::size_t i = 0; i < control::kParamCount; ++i) p.values[i] = x[static_cast<Eigen::Index>(i)];
  const sim::Trajectory traj = sim::rollout(p, model, ground, duration, sim);
  TrialOutcome out;
  out.inputs = metrics::cost_inputs(traj, cc);
  out.cost = metrics::cost(cost, out.inputs);
  out.walked = !traj.fell();
  return out;
}

nlohmann::json result_to_json(const RunResult& r) {
  return {{"run", r.run_id},
          {"strategy", to_string(r.strategy)},
          {"seed", r.seed},
          {"disturbance", r.disturbance},
          {"terrain_seed", r.terrain_seed},
          {"budget", r.history.budget},
          {"trials", r.history.history.size()},
          {"success", r.success},
          {"best_cost", r.best_cost},
          {"first_success", r.first_success}};
}

RunResult result_from_json(const nlohmann::json& j) {
  RunResult r;
  r.run_id = j.at("run").get<int>();
  r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.disturbance = j.at("disturbance").get<sim::Disturbance>();
  r.terrain_seed = j.at("terrain_seed").get<std::uint64_t>();
  r.history.budget = j.at("budget").get<int>();
  r.success = j.at("success").get<bool>();
  r.best_cost = j.at("best_cost").get<double>();
  r.first_success = j.at("first_success").get<int>();
  return r;
}

ExperimentContext load_context(const ExperimentConfig& cfg) {
  ExperimentContext ctx;
  if (!cfg.store_path.empty() && fs::exists(cfg.store_path)) {
    auto s = std::make_shared<store::FeatureStore>(store::load(cfg.store_path));
    store::check_staleness(*s, sim::sim_config_hash(cfg.model, cfg.sim), cfg.staleness);
    ctx.store = std::move(s);
  }
  return ctx;
}

RunResult run_strategy(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                       const RunConditions& cond, Strategy s) {
  RunResult r;
  r.run_id = cond.run_id;
  r.strategy = s;
  r.seed = cond.seeds.strategy(s);
  r.disturbance = cond.disturbance;
  r.terrain_seed = cfg.terrain.kind == sim::GroundKind::kRough ? cond.seeds.terrain : 0;

  std::vector<bool> walked;
  opt::Objective f = [&](const Eigen::VectorXd& x) {
    try {
      const TrialOutcome o =
          evaluate_params(x, cond.model, cond.ground, cfg.duration, cfg.cost, cfg.sim, cfg.cost_config);
      walked.push_back(o.walked);
      return o.cost;
    } catch (...) {
      walked.push_back(false);
      throw;
    }
  };
  opt::EvalOptions eval;
  eval.fault_cost = metrics::fault_cost(cfg.cost);
  eval.record_wall_time = cfg.record_wall_time;
  const opt::Box box = make_box(cfg.bounds);

  auto need_store = [&]() -> const store::FeatureStore& {
    if (!ctx.store) throw StateError("strategy " + to_string(s) + " needs a feature store");
    return *ctx.store;
  };

  switch (s) {
    case Strategy::kBoDog:
    case Strategy::kBoSe: {
      const store::FeatureStore& st = need_store();
      opt::CandidateGrid grid(st.params());
      const gp::Kernel k = s == Strategy::kBoDog ? gp::se_dog(ctx.store, cfg.standardize_phi)
                                                 : gp::se_euclidean(box.lower, box.upper);
      opt::BoOptions o;
      o.acquisition = cfg.acquisition;
      o.fit_hyperparams = cfg.fit_hyperparams;
      o.eval = eval;
      o.strategy = to_string(s);
      r.history = opt::run_bo(f, std::move(grid), k, cfg.budget, r.seed, o);
      break;
    }
    case Strategy::kRandom:
      r.history = opt::run_random_search(f, box, cfg.budget, r.seed, eval);
      break;
    case Strategy::kCmaes:
    case Strategy::kCmaesWarm: {
      opt::CmaesOptions o;
      o.eval = eval;
      o.strategy = to_string(s);
      // Cold starts draw a uniform point in the box.
      Rng init_rng(derive_seed(r.seed, kColdStartStream));
      Eigen::VectorXd init(box.dim());
      for (int i = 0; i < box.dim(); ++i) init[i] = uniform(init_rng, box.lower[i], box.upper[i]);
      double sigma = cfg.cmaes_sigma;
      if (s == Strategy::kCmaesWarm) {
        const store::FeatureStore& st = need_store();
        init = opt::warm_start_from_store(st, std::min(cfg.warm_k, st.size()), r.seed);
        sigma = cfg.warm_sigma;
      }
      r.history = opt::run_cmaes(f, box, init, sigma, cfg.budget, r.seed, o);
      break;
    }
  }
  r.walked = walked;
  for (std::size_t i = 0; i < r.history.history.size(); ++i) {
    r.history.history[i].walked = i < walked.size() && walked[i];
    if (r.first_success < 0 && r.history.history[i].walked) r.first_success = static_cast<int>(i) + 1;
  }
  r.best_cost = r.history.best_cost();
  // Success is re-derived from the best parameters under the same conditions.
  if (!r.history.history.empty()) {
    const opt::Trial& best = r.history.best_trial();
    r.success = best.walked;
  }
  return r;
}

std::string run_file_stem(int run_id, Strategy s) {
  std::ostringstream o;
  o << "run_" << std::setw(3) << std::setfill('0') << run_id << '_' << to_string(s);
  return o.str();
}

namespace {

void persist(const fs::path& dir, const RunResult& r, bool with_wall_time) {
  const std::string stem = run_file_stem(r.run_id, r.strategy);
  std::ostringstream jsonl;
  opt::write_jsonl(jsonl, r.history, with_wall_time);
  write_text_atomic(dir / (stem + ".jsonl"), jsonl.str());
  write_text_atomic(dir / (stem + ".result.json"), result_to_json(r).dump(2) + "\n");
}

RunResult load_pair(const fs::path& dir, const std::string& stem) {
  std::ifstream rj(dir / (stem + ".result.json"));
  RunResult r = result_from_json(nlohmann::json::parse(rj));
  std::ifstream in(dir / (stem + ".jsonl"));
  std::string line;
  r.history.strategy = to_string(r.strategy);
  r.history.seed = r.seed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    opt::Trial t = opt::trial_from_json(nlohmann::json::parse(line));
    const double prev = r.history.best_cost();
    r.history.best_so_far.push_back(std::min(prev, t.cost));
    r.walked.push_back(t.walked);
    r.history.history.push_back(std::move(t));
  }
  return r;
}

}  // namespace

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(cfg, load_context(cfg));
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, const ExperimentContext& ctx) {
  const fs::path dir = fs::path(cfg.output_dir) / "runs";
  fs::create_directories(dir);
  write_text_atomic(fs::path(cfg.output_dir) / "config.json", nlohmann::json(cfg).dump(2) + "\n");

  struct Job {
    int run;
    Strategy strategy;
  };
  std::vector<Job> jobs;
  for (int r = 0; r < cfg.runs; ++r) {
    for (Strategy s : cfg.strategies) {
      if (!fs::exists(dir / (run_file_stem(r, s) + ".result.json"))) jobs.push_back({r, s});
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const RunConditions cond = run_conditions(cfg, jobs[i].run);
        persist(dir, run_strategy(cfg, ctx, cond, jobs[i].strategy), cfg.record_wall_time);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int workers = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);

  std::vector<RunResult> out;
  for (int r = 0; r < cfg.runs; ++r) {
    for (Strategy s : cfg.strategies) out.push_back(load_pair(dir, run_file_stem(r, s)));
  }
  return out;
}

std::vector<RunResult> load_results(const std::string& output_dir) {
  const fs::path dir = fs::path(output_dir) / "runs";
  if (!fs::exists(dir)) throw ParameterError("no results under " + output_dir);
  std::vector<std::string> stems;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    const std::string suffix = ".result.json";
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      stems.push_back(name.substr(0, name.size() - suffix.size()));
    }
  }
  std::vector<RunResult> out;
  for (const auto& s : stems) out.push_back(load_pair(dir, s));
  std::sort(out.begin(), out.end(), [](const RunResult& a, const RunResult& b) {
    return a.run_id < b.run_id || (a.run_id == b.run_id && a.strategy < b.strategy);
  });
  return out;
}

OptimumEstimate estimate_optimum(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                                 int runs, int bo_budget, int cma_budget) {
  if (runs < 1) throw ParameterError("runs must be at least 1");
  ExperimentConfig easy = cfg;
  easy.disturbance = 0.0;
  easy.terrain.kind = sim::GroundKind::kFlat;
  OptimumEstimate est;
  est.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < runs; ++r) {
    RunConditions cond = run_conditions(easy, r);
    cond.seeds.run = derive_seed(cond.seeds.run, kOptimumStream);
    double best = std::numeric_limits<double>::infinity();
    if (bo_budget > 0 && ctx.store) {
      easy.budget = bo_budget;
      best = std::min(best, run_strategy(easy, ctx, cond, Strategy::kBoDog).best_cost);
    }
    if (cma_budget > 0) {
      easy.budget = cma_budget;
      best = std::min(best, run_strategy(easy, ctx, cond, Strategy::kCmaes).best_cost);
    }
    est.per_run.push_back(best);
    est.value = std::min(est.value, best);
  }
  return est;
}

}  // namespace gaitbo::harness
