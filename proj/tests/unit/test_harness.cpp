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

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "gaitbo/errors.h"
#include "gaitbo/harness/experiment.h"
#include "gaitbo/harness/summary.h"
#include "gaitbo/metrics/cost.h"
#include "gaitbo/store/feature_store.h"
#include "test_util.h"

using namespace gaitbo;
namespace fs = std::filesystem;

namespace {

// Small store shared by the grid strategies.
const std::string& small_store_path() {
  static const std::string path = [] {
    const fs::path dir = testing::scratch_dir("harness_store");
    store::PrecomputeConfig c;
    c.n = 64;
    c.created = "fixture";
    const std::string p = (dir / "store64.bin").string();
    store::save(store::precompute(c), p);
    return p;
  }();
  return path;
}

harness::ExperimentConfig small_config(const fs::path& out) {
  harness::ExperimentConfig c;
  c.runs = 2;
  c.budget = 4;
  c.duration = 2.0;
  c.store_path = small_store_path();
  c.output_dir = out.string();
  c.master_seed = 11;
  c.warm_k = 10;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

std::vector<double> best_so_far_from_jsonl(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<double> out;
  double m = std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    m = std::min(m, nlohmann::json::parse(line).at("cost").get<double>());
    out.push_back(m);
  }
  return out;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GAITBO_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("one run, one trial, random search") {
  const fs::path out = testing::scratch_dir("h_single");
  harness::ExperimentConfig c = small_config(out);
  c.runs = 1;
  c.budget = 1;
  c.strategies = {harness::Strategy::kRandom};
  c.store_path.clear();
  const auto rs = harness::run_experiment(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].history.history.size() == 1);
  CHECK(rs[0].best_cost == rs[0].history.history[0].cost);
  CHECK(fs::exists(out / "runs" / "run_000_random.jsonl"));
  CHECK(fs::exists(out / "runs" / "run_000_random.result.json"));
  CHECK(fs::exists(out / "config.json"));
}

TEST_CASE("seed splitting follows the documented splitmix scheme") {
  const harness::RunSeeds s = harness::run_seeds(11, 3);
  CHECK(s.run == splitmix(splitmix(11 ^ 0x52554eULL) + 3));
  CHECK(s.disturbance == splitmix(splitmix(s.run ^ 0x444953ULL)));
  CHECK(s.terrain == splitmix(splitmix(s.run ^ 0x544552ULL)));
  CHECK(s.strategy(harness::Strategy::kBoSe) == splitmix(splitmix(s.run ^ 0x535452ULL) + 1));
  CHECK(harness::run_seeds(11, 4).run != s.run);
  CHECK(harness::run_seeds(12, 3).run != s.run);
}

TEST_CASE("same master seed gives identical results and bytes") {
  const fs::path a = testing::scratch_dir("h_det_a");
  const fs::path b = testing::scratch_dir("h_det_b");
  const auto ra = harness::run_experiment(small_config(a));
  const auto rb = harness::run_experiment(small_config(b));
  CHECK(ra == rb);
  const auto ba = dir_bytes(a / "runs");
  CHECK(ba == dir_bytes(b / "runs"));
  CHECK(ba.size() == 2 * 5 * 2);

  harness::ExperimentConfig other = small_config(testing::scratch_dir("h_det_c"));
  other.master_seed = 12;
  CHECK(harness::run_experiment(other) != ra);
}

TEST_CASE("strategies within a run observe the same conditions") {
  const fs::path out = testing::scratch_dir("h_pair");
  const auto rs = harness::run_experiment(small_config(out));
  std::map<int, std::vector<const harness::RunResult*>> by_run;
  for (const auto& r : rs) by_run[r.run_id].push_back(&r);
  REQUIRE(by_run.size() == 2);
  for (const auto& [id, group] : by_run) {
    REQUIRE(group.size() == 5);
    for (const auto* r : group) {
      CHECK(r->disturbance == group[0]->disturbance);
      CHECK(r->terrain_seed == group[0]->terrain_seed);
      CHECK(r->history.history.size() == 4);
    }
  }
  CHECK_FALSE(by_run[0][0]->disturbance == by_run[1][0]->disturbance);
  CHECK(by_run[0][0]->terrain_seed != by_run[1][0]->terrain_seed);

  // The recorded conditions are the ones sampled from the run seed.
  const harness::RunConditions cond = harness::run_conditions(small_config(out), 1);
  CHECK(by_run[1][0]->disturbance == cond.disturbance);
  CHECK(by_run[1][0]->terrain_seed == cond.seeds.terrain);
}

TEST_CASE("success flag matches re-evaluating the best parameters") {
  const fs::path out = testing::scratch_dir("h_success");
  harness::ExperimentConfig c = small_config(out);
  const auto rs = harness::run_experiment(c);
  for (const auto& r : rs) {
    CAPTURE(harness::to_string(r.strategy));
    const harness::RunConditions cond = harness::run_conditions(c, r.run_id);
    const opt::Trial& best = r.history.best_trial();
    const harness::TrialOutcome o = harness::evaluate_params(best.params, cond.model, cond.ground,
                                                             c.duration, c.cost, c.sim, c.cost_config);
    CHECK(o.cost == best.cost);
    CHECK(o.walked == r.success);
    CHECK(r.best_cost == best.cost);
  }
}

TEST_CASE("kill and resume reproduces the uninterrupted result set") {
  const fs::path full = testing::scratch_dir("h_resume_full");
  const fs::path part = testing::scratch_dir("h_resume_part");
  const harness::ExperimentConfig cf = small_config(full);
  harness::ExperimentConfig cp = small_config(part);
  const auto expected = harness::run_experiment(cf);

  // First pass stops after run 0.
  cp.runs = 1;
  harness::run_experiment(cp);
  cp.runs = 2;
  // A kill mid-job leaves at most a partial history without its result file.
  fs::remove(part / "runs" / "run_000_cmaes.result.json");
  {
    std::ofstream trunc(part / "runs" / "run_000_cmaes.jsonl", std::ios::trunc);
    trunc << "{\"trial\":0";
  }
  const auto resumed = harness::run_experiment(cp);
  CHECK(resumed == expected);
  CHECK(dir_bytes(part / "runs") == dir_bytes(full / "runs"));
  CHECK(slurp(part / "config.json").size() > 0);

  // Rerunning a finished experiment is a no-op on the run files.
  const auto before = dir_bytes(full / "runs");
  CHECK(harness::run_experiment(cf) == expected);
  CHECK(dir_bytes(full / "runs") == before);
}

TEST_CASE("worker count does not change results") {
  harness::ExperimentConfig one = small_config(testing::scratch_dir("h_w1"));
  harness::ExperimentConfig four = small_config(testing::scratch_dir("h_w4"));
  four.workers = 4;
  CHECK(harness::run_experiment(one) == harness::run_experiment(four));
  CHECK(dir_bytes(fs::path(one.output_dir) / "runs") == dir_bytes(fs::path(four.output_dir) / "runs"));
}

TEST_CASE("quantile interpolates linearly between order statistics") {
  CHECK(harness::quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
  CHECK(harness::quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));
  CHECK(harness::quantile({4, 1, 3, 2}, 0.75) == doctest::Approx(3.25));
  CHECK(harness::quantile({7}, 0.3) == 7);
  CHECK(harness::quantile({1, 2, 3, 4, 5}, 0.5) == 3);
  CHECK_THROWS_AS(harness::quantile({}, 0.5), ParameterError);
}

TEST_CASE("summary CSV matches a recomputation from the JSONL histories") {
  const fs::path out = testing::scratch_dir("h_summary");
  harness::ExperimentConfig c = small_config(out);
  c.runs = 3;
  const auto rs = harness::run_experiment(c);
  const harness::Summary s = harness::summarize(harness::load_results(out.string()));
  harness::write_summary_files(out.string(), s, "test");
  CHECK(fs::exists(out / "convergence.svg"));
  CHECK(slurp(out / "convergence.svg").find("<svg") != std::string::npos);

  std::ifstream in(out / "summary.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "strategy,trial,n,mean,median,q25,q75,min,max");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    REQUIRE(f.size() == 9);
    const std::string strat = f[0];
    const int trial = std::stoi(f[1]);
    std::vector<double> v;
    for (int r = 0; r < 3; ++r) {
      const fs::path p = out / "runs" / (harness::run_file_stem(r, harness::strategy_from_string(strat)) + ".jsonl");
      v.push_back(best_so_far_from_jsonl(p).at(static_cast<std::size_t>(trial - 1)));
    }
    std::sort(v.begin(), v.end());
    CAPTURE(line);
    CHECK(std::stoi(f[2]) == 3);
    CHECK(std::stod(f[3]) == doctest::Approx((v[0] + v[1] + v[2]) / 3.0).epsilon(1e-14));
    CHECK(std::stod(f[4]) == v[1]);
    CHECK(std::stod(f[5]) == doctest::Approx(0.5 * (v[0] + v[1])).epsilon(1e-14));
    CHECK(std::stod(f[6]) == doctest::Approx(0.5 * (v[1] + v[2])).epsilon(1e-14));
    CHECK(std::stod(f[7]) == v[0]);
    CHECK(std::stod(f[8]) == v[2]);
    ++rows;
  }
  CHECK(rows == 5 * 4);

  // Summarizing twice from disk gives the same bytes.
  const std::string first = slurp(out / "summary.csv");
  harness::write_summary_files(out.string(), harness::summarize(harness::load_results(out.string())), "test");
  CHECK(slurp(out / "summary.csv") == first);
}

TEST_CASE("single run curve equals its best-so-far; success rate is an exact fraction") {
  harness::RunResult a;
  a.strategy = harness::Strategy::kRandom;
  a.history.best_so_far = {5.0, 3.0, 3.0, 1.0};
  a.success = true;
  a.first_success = 4;
  harness::Summary s = harness::summarize({a});
  REQUIRE(s.strategies.size() == 1);
  const auto& curve = s.strategies[0].curve;
  REQUIRE(curve.size() == 4);
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(curve[t].trial == static_cast<int>(t) + 1);
    CHECK(curve[t].mean == a.history.best_so_far[t]);
    CHECK(curve[t].median == a.history.best_so_far[t]);
    CHECK(curve[t].q25 == a.history.best_so_far[t]);
    CHECK(curve[t].max == a.history.best_so_far[t]);
  }

  std::vector<harness::RunResult> many;
  for (int i = 0; i < 7; ++i) {
    harness::RunResult r = a;
    r.run_id = i;
    r.success = i % 3 == 0;  // 0, 3, 6
    many.push_back(r);
  }
  s = harness::summarize(many, 0.5);
  CHECK(s.strategies[0].successes == 3);
  CHECK(s.strategies[0].success_rate == 3.0 / 7.0);
  CHECK(s.find(harness::Strategy::kBoDog) == nullptr);
  std::ostringstream csv;
  harness::write_success_csv(csv, s);
  CHECK(csv.str().find("random,7,3,") != std::string::npos);
  std::ostringstream curve_csv;
  harness::write_curve_csv(curve_csv, s);
  CHECK(curve_csv.str().find("optimum,0,0,0.5,0.5") != std::string::npos);
  CHECK_THROWS_AS(harness::summarize({}), ParameterError);
}

TEST_CASE("estimated optimum respects the smooth-cost floor and is monotone in runs") {
  harness::ExperimentConfig c = small_config(testing::scratch_dir("h_opt"));
  c.validate();
  const harness::ExperimentContext ctx = harness::load_context(c);
  const harness::OptimumEstimate e3 = harness::estimate_optimum(c, ctx, 3, 4, 6);
  const harness::OptimumEstimate e1 = harness::estimate_optimum(c, ctx, 1, 4, 6);
  REQUIRE(e3.per_run.size() == 3);
  CHECK(e3.value >= 1.0 / (1.0 + c.duration));
  CHECK(e3.value <= e1.value);
  CHECK(e1.per_run[0] == e3.per_run[0]);
  CHECK(e3.value == *std::min_element(e3.per_run.begin(), e3.per_run.end()));
  CHECK_THROWS_AS(harness::estimate_optimum(c, ctx, 0, 4, 6), ParameterError);
}

TEST_CASE("config JSON round-trips and validation rejects bad values") {
  harness::ExperimentConfig c = small_config("somewhere");
  c.cost = metrics::CostVariant::kCma;
  c.terrain.kind = sim::GroundKind::kRampDown;
  c.strategies = {harness::Strategy::kCmaes, harness::Strategy::kBoSe};
  c.record_wall_time = true;
  c.staleness = store::StalenessPolicy::kFail;
  const nlohmann::json j = c;
  harness::ExperimentConfig back;
  harness::merge_json(j, back);
  CHECK(nlohmann::json(back) == j);

  harness::ExperimentConfig partial;
  harness::merge_json(nlohmann::json{{"runs", 3}, {"terrain", {{"magnitude", 0.06}}}}, partial);
  CHECK(partial.runs == 3);
  CHECK(partial.terrain.magnitude == 0.06);
  CHECK(partial.budget == harness::ExperimentConfig{}.budget);

  const auto full = harness::preset("full");
  CHECK(full.runs == 50);
  CHECK(full.budget == 100);
  CHECK(harness::preset("ci").runs == 10);
  CHECK(harness::preset("ci").budget == 30);
  CHECK_THROWS_AS(harness::preset("nope"), ParameterError);

  harness::ExperimentConfig bad = small_config("x");
  bad.runs = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = small_config("x");
  bad.budget = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = small_config("x");
  bad.store_path = "/nonexistent/store.bin";
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad.strategies = {harness::Strategy::kRandom, harness::Strategy::kCmaes};
  CHECK_NOTHROW(bad.validate());
  CHECK_THROWS_AS(harness::strategy_from_string("sgd"), ParameterError);
}

TEST_CASE("CLI exit codes separate config errors from success") {
  const fs::path dir = testing::scratch_dir("h_cli");
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("optimize --preset nope") == 2);
  CHECK(run_cli("optimize --runs 1 --budget 1 --store /nonexistent.bin -o " + (dir / "o").string()) == 2);
  CHECK(run_cli("optimize --runs 1 --budget 1 --duration 1 --strategies random -o " +
                (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "summary.csv"));
  CHECK(fs::exists(dir / "ok" / "success.csv"));
  CHECK(run_cli("summarize " + (dir / "ok").string()) == 0);
  CHECK(run_cli("summarize " + (dir / "missing").string()) == 2);
  CHECK(run_cli("defaults " + (dir / "fixtures").string()) == 0);
  CHECK(fs::exists(dir / "fixtures" / "experiment.json"));
  CHECK(run_cli("replay --params " + testing::data_path("reference_params.json") +
                " --duration 1 -o " + (dir / "traj.csv").string()) == 0);
  CHECK(fs::file_size(dir / "traj.csv") > 0);
  CHECK(run_cli("replay") == 2);
}
