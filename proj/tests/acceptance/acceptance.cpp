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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Work files go under GAITBO_ACCEPT_DIR,
// which the environment variable of the same name overrides.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gaitbo/control/params.h"
#include "gaitbo/gp/gp.h"
#include "gaitbo/gp/kernel.h"
#include "gaitbo/harness/experiment.h"
#include "gaitbo/metrics/cost.h"
#include "gaitbo/metrics/dog.h"
#include "gaitbo/opt/bo.h"
#include "gaitbo/opt/cmaes.h"
#include "gaitbo/opt/sobol.h"
#include "gaitbo/random.h"
#include "gaitbo/sim/dynamics.h"
#include "gaitbo/sim/kinematics.h"
#include "gaitbo/sim/rollout.h"
#include "gaitbo/store/feature_store.h"

using namespace gaitbo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(rel * scale, abs_floor);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

fs::path work_dir() {
  const char* env = std::getenv("GAITBO_ACCEPT_DIR");
  return fs::path(env && *env ? env : GAITBO_ACCEPT_DIR);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> jsonl_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir / "runs")) {
    out[e.path().filename().string()] = slurp(e.path());
  }
  return out;
}

// ---- 1: formulas ----------------------------------------------------------

double rnd(Rng& r, double lo, double hi) { return lo + (hi - lo) * uniform01(r); }

metrics::StepRecord random_step(Rng& r) {
  metrics::StepRecord s;
  s.knee_swing = rnd(r, -0.2, 2.0);
  s.ankle_strike = rnd(r, -0.5, 0.5);
  s.ankle_toe_off = rnd(r, -0.5, 0.8);
  s.com_y_strike = rnd(r, 0.9, 1.1);
  s.com_y_midstance = rnd(r, 0.9, 1.1);
  s.com_y_toe_off = rnd(r, 0.9, 1.1);
  s.torso_mean = rnd(r, -0.4, 0.4);
  s.speed = rnd(r, -1.5, 3.0);
  s.t_next_strike = rnd(r, 0.0, 6.0);
  return s;
}

// Written from the metric definitions, separately from the library code.
double oracle_step(const metrics::StepRecord& s, double m[5]) {
  m[0] = (s.knee_swing > 0.35 && s.knee_swing < 1.40) ? 1 : 0;
  m[1] = (s.ankle_strike < 0 && s.ankle_toe_off > 0) ? 1 : 0;
  m[2] = (s.com_y_midstance > s.com_y_strike && s.com_y_midstance > s.com_y_toe_off) ? 1 : 0;
  m[3] = s.torso_mean > 0 ? 1 : 0;
  m[4] = std::fabs(s.speed - 1.3);
  return m[0] + m[1] + m[2] + m[3] + m[4];
}

Outcome criterion_formulas() {
  Rng r(20260101);
  const int n = 10000;
  int bad = 0;
  // Costs.
  for (int i = 0; i < n; ++i) {
    metrics::CostInputs in;
    in.t = rnd(r, 0.0, 100.0);
    in.d = rnd(r, 0.0, 150.0);
    in.s = rnd(r, -1.0, 2.5);
    in.fell = uniform01(r) < 0.5;
    in.x_fall = rnd(r, 0.0, 150.0);
    in.v_avg = rnd(r, -1.0, 2.5);
    in.c_tr = rnd(r, 0.0, 3.0);
    const double smooth = 1.0 / (1.0 + in.t) + 0.3 / (1.0 + in.d) + 0.01 * (in.s - 1.3);
    const double cma = in.fell ? 300.0 - in.x_fall : 100.0 * std::fabs(in.v_avg - 1.3) + in.c_tr;
    bad += !close_rel(metrics::smooth_cost(in), smooth, 1e-12);
    bad += !close_rel(metrics::cma_cost(in), cma, 1e-12);
  }
  // Per-step metrics and score.
  for (int i = 0; i < n; ++i) {
    const metrics::StepRecord s = random_step(r);
    double m[5];
    const double want = oracle_step(s, m);
    const metrics::StepScore got = metrics::score_step(s);
    bad += got.m1 != m[0] || got.m2 != m[1] || got.m3 != m[2] || got.m4 != m[3];
    bad += !close_rel(got.m5, m[4], 1e-12);
    bad += !close_rel(got.score, want, 1e-12);
  }
  // phi: sum over cycles completed inside the 5 s window.
  for (int i = 0; i < n; ++i) {
    std::vector<metrics::StepRecord> steps(uniform_index(r, 12));
    double want = 0.0;
    for (auto& s : steps) {
      s = random_step(r);
      double m[5];
      if (s.t_next_strike <= 5.0) want += oracle_step(s, m);
    }
    bad += !close_rel(metrics::dog_score(steps).phi, want, 1e-12, 1e-300);
  }
  // k_SE on the unit-normalized box.
  const control::ParamBounds b = control::default_bounds();
  Eigen::VectorXd lo(16), hi(16);
  for (int j = 0; j < 16; ++j) {
    lo[j] = b.lower[j];
    hi[j] = b.upper[j];
  }
  for (int i = 0; i < n; ++i) {
    const double l = rnd(r, 0.05, 3.0), s2 = rnd(r, 0.1, 5.0);
    const gp::Kernel k = gp::se_euclidean(lo, hi, {l, s2});
    Eigen::VectorXd x(16), y(16);
    double d2 = 0.0;
    for (int j = 0; j < 16; ++j) {
      x[j] = rnd(r, lo[j], hi[j]);
      y[j] = rnd(r, lo[j], hi[j]);
      const double d = (x[j] - y[j]) / (hi[j] - lo[j]);
      d2 += d * d;
    }
    bad += !close_rel(k(x, y), s2 * std::exp(-d2 / (2 * l * l)), 1e-12, 1e-300);
  }
  // k_DoG, raw and z-scored phi.
  const int rows = 200;
  Eigen::MatrixXd p(rows, 16);
  Eigen::VectorXd phi(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < 16; ++j) p(i, j) = uniform01(r);
    phi[i] = rnd(r, 0.0, 30.0);
  }
  const auto st = std::make_shared<store::FeatureStore>(p, phi, store::StoreMetadata{});
  double mean = 0.0, var = 0.0;
  for (int i = 0; i < rows; ++i) mean += phi[i];
  mean /= rows;
  for (int i = 0; i < rows; ++i) var += (phi[i] - mean) * (phi[i] - mean);
  const double sd = std::sqrt(var / rows);
  for (int i = 0; i < n; ++i) {
    const double l = rnd(r, 0.05, 3.0), s2 = rnd(r, 0.1, 5.0);
    const std::size_t a = uniform_index(r, rows), c = uniform_index(r, rows);
    const double dr = phi[a] - phi[c];
    const double dz = dr / sd;
    bad += !close_rel(gp::se_dog(st, false, {l, s2})(st->row(a), st->row(c)),
                      s2 * std::exp(-dr * dr / (2 * l * l)), 1e-12, 1e-300);
    bad += !close_rel(gp::se_dog(st, true, {l, s2})(st->row(a), st->row(c)),
                      s2 * std::exp(-dz * dz / (2 * l * l)), 1e-12, 1e-300);
  }
  return {bad == 0, fmt("%d mismatches over 10000 inputs per formula", bad)};
}

// ---- 2, 3: GP and kernels -------------------------------------------------

Outcome criterion_gp() {
  Rng r(77);
  int bad = 0, var_bad = 0;
  double worst = 0.0;
  for (int ds = 0; ds < 500; ++ds) {
    const int n = 1 + static_cast<int>(uniform_index(r, 8));
    const int dim = 1 + static_cast<int>(uniform_index(r, 4));
    const double l = rnd(r, 0.2, 1.5), s2 = rnd(r, 0.5, 3.0), noise = rnd(r, 1e-4, 1e-1);
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    for (int i = 0; i < n; ++i) {
      xs.push_back(Eigen::VectorXd::NullaryExpr(dim, [&] { return uniform01(r); }));
      ys.push_back(rnd(r, -2.0, 2.0));
    }
    const gp::Kernel k(gp::KernelKind::kSeEuclidean, std::make_shared<gp::IdentityFeatureMap>(), {l, s2});
    const gp::GpModel m = gp::GpModel::fit(k, xs, ys, noise);
    auto kse = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return s2 * std::exp(-(a - b).squaredNorm() / (2 * l * l));
    };
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = kse(xs[i], xs[j]);
      a(i, i) += noise;
      y[i] = ys[i];
    }
    const Eigen::MatrixXd inv = a.fullPivLu().inverse();
    for (int q = 0; q < 10; ++q) {
      const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(dim, [&] { return rnd(r, -0.5, 1.5); });
      Eigen::VectorXd kq(n);
      for (int i = 0; i < n; ++i) kq[i] = kse(xs[i], x);
      const double mean = kq.dot(inv * y);
      const double var = s2 - kq.dot(inv * kq);
      const gp::Posterior got = m.posterior(x);
      if (!close_rel(got.mean, mean, 1e-8, 1e-12) || !close_rel(got.variance, var, 1e-8, 1e-12)) ++bad;
      worst = std::max(worst, std::abs(got.mean - mean) / std::max(1e-12, std::abs(mean)));
      if (got.variance > s2 + 1e-8) ++var_bad;
    }
  }
  return {bad == 0 && var_bad == 0,
          fmt("500 datasets x 10 queries: %d posterior mismatches, %d variance above prior, "
              "worst mean rel err %.2e",
              bad, var_bad, worst)};
}

Outcome criterion_psd() {
  Rng r(5);
  const int rows = 400;
  Eigen::MatrixXd p(rows, 16);
  Eigen::VectorXd phi(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < 16; ++j) p(i, j) = uniform01(r);
    // Many repeated phi values, as in a real store full of fallers.
    phi[i] = uniform01(r) < 0.5 ? 0.0 : rnd(r, 0.0, 25.0);
  }
  const auto st = std::make_shared<store::FeatureStore>(p, phi, store::StoreMetadata{});
  double min_ev = 1e300;
  for (int set = 0; set < 200; ++set) {
    const gp::KernelParams kp{rnd(r, 0.05, 2.0), rnd(r, 0.1, 3.0)};
    const gp::Kernel se = gp::se_euclidean(Eigen::VectorXd::Zero(16), Eigen::VectorXd::Ones(16), kp);
    const gp::Kernel dog = gp::se_dog(st, true, kp);
    std::vector<std::size_t> idx(20);
    for (auto& i : idx) i = uniform_index(r, rows);
    for (const gp::Kernel* k : {&se, &dog}) {
      Eigen::MatrixXd g(20, 20);
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) g(i, j) = (*k)(st->row(idx[i]), st->row(idx[j]));
      min_ev = std::min(min_ev, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff());
    }
  }
  return {min_ev >= -1e-8, fmt("min Gram eigenvalue %.3e over 200 sets x 2 kernels", min_ev)};
}

// ---- 4: physics -----------------------------------------------------------

sim::SimState airborne() {
  sim::SimState s;
  s.q[sim::kY] = 3.0;
  s.q[sim::kHipL] = 0.3;
  s.q[sim::kKneeL] = 0.5;
  s.q[sim::kHipR] = -0.2;
  s.q[sim::kKneeR] = 0.8;
  s.q[sim::kAnkleR] = 0.1;
  s.qd[sim::kX] = 1.0;
  s.qd[sim::kY] = 4.905;
  s.qd[sim::kPitch] = 0.5;
  s.qd[sim::kHipL] = 0.4;
  s.qd[sim::kKneeL] = 0.3;
  s.qd[sim::kAnkleL] = -0.3;
  s.qd[sim::kHipR] = 0.3;
  s.qd[sim::kKneeR] = -0.3;
  return s;
}

double ballistic_error(double dt) {
  const sim::LinkSet m = sim::default_link_set();
  const sim::PhysicsParams ph;
  sim::SimState s = airborne();
  const sim::Kinematics k0 = sim::compute_kinematics(s, m);
  const int n = static_cast<int>(std::lround(0.5 / dt));
  double err = 0.0;
  for (int i = 1; i <= n; ++i) {
    s = sim::step_dynamics(s, sim::JointTorques{}, m, ph, sim::flat_ground(), dt);
    const double t = i * dt;
    const Eigen::Vector2d want =
        k0.com_total + k0.com_total_vel * t + Eigen::Vector2d(0.0, -0.5 * ph.gravity * t * t);
    err = std::max(err, (sim::compute_kinematics(s, m).com_total - want).norm());
  }
  return err;
}

Outcome criterion_physics() {
  const sim::LinkSet m = sim::default_link_set();
  const sim::PhysicsParams ph;
  sim::SimState s = airborne();
  const double e0 = sim::mechanical_energy(s, m, ph.gravity);
  double drift = 0.0;
  for (int i = 0; i < 1000; ++i) {
    s = sim::step_dynamics(s, sim::JointTorques{}, m, ph, sim::flat_ground(), 0.001);
    drift = std::max(drift, std::abs(sim::mechanical_energy(s, m, ph.gravity) - e0) / e0);
  }
  // The fixed production step is 1 ms; the finer step is reported for context.
  const double ballistic = ballistic_error(0.001);
  const double ballistic_fine = ballistic_error(0.00025);

  double min_normal = 1e300;
  int rollouts = 0;
  const Eigen::MatrixXd u = opt::sobol_points(64, 16);
  const control::ParamBounds b = control::default_bounds();
  for (int i = 0; i < 64; ++i) {
    std::array<double, 16> row{};
    for (int j = 0; j < 16; ++j) row[j] = u(i, j);
    const sim::Trajectory t = sim::rollout(b.from_unit(row), m, sim::flat_ground(), 5.0);
    min_normal = std::min(min_normal, t.min_normal_force);
    ++rollouts;
  }
  const control::PolicyParams ref = control::load_params(std::string(GAITBO_DATA_DIR) + "/reference_params.json");
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const sim::LinkSet dm = sim::build_model(m, sim::sample_disturbance(seed, 0.1, m));
    const sim::Trajectory flat = sim::rollout(ref, dm, sim::flat_ground(), 20.0);
    const sim::Trajectory rough = sim::rollout(ref, dm, sim::rough_ground(seed, 0.04), 20.0);
    min_normal = std::min({min_normal, flat.min_normal_force, rough.min_normal_force});
    rollouts += 2;
  }
  const bool pass = drift < 0.005 && ballistic < 1e-3 && min_normal >= 0.0;
  return {pass, fmt("energy drift %.3f%%; ballistic error %.3e m at dt 1 ms (%.3e at 0.25 ms); "
                    "min normal force %.3g N over %d rollouts",
                    100 * drift, ballistic, ballistic_fine, min_normal, rollouts)};
}

// ---- 5: optimizers --------------------------------------------------------

Outcome criterion_optimizers() {
  int cma_ok = 0, bo_ok = 0;
  const opt::Box box{Eigen::VectorXd::Constant(16, -1.0), Eigen::VectorXd::Constant(16, 2.0)};
  auto sphere = [](const Eigen::VectorXd& x) { return (x.array() - 0.3).square().sum(); };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng r(seed);
    Eigen::VectorXd init(16);
    for (int i = 0; i < 16; ++i) init[i] = rnd(r, -1.0, 2.0);
    cma_ok += opt::run_cmaes(sphere, box, init, 0.3, 3000, seed).best_cost() < 1e-6;
  }
  auto bowl = [](const Eigen::VectorXd& x) {
    return 1.0 + std::pow(x[0] - 0.37, 2) + 2.0 * std::pow(x[1] - 0.61, 2);
  };
  Eigen::MatrixXd grid(625, 2);
  double grid_min = 1e300;
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 25; ++j) {
      grid(i * 25 + j, 0) = (i + 0.5) / 25;
      grid(i * 25 + j, 1) = (j + 0.5) / 25;
      grid_min = std::min(grid_min, bowl(grid.row(i * 25 + j).transpose()));
    }
  }
  const gp::Kernel k = gp::se_euclidean(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    bo_ok += opt::run_bo(bowl, opt::CandidateGrid(grid), k, 30, seed).best_cost() <= 1.05 * grid_min;
  }
  // Leading points of the plain sequence in 16 dimensions.
  const double want[8][16] = {
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
      {0.75, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25},
      {0.25, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75},
      {0.375, 0.375, 0.625, 0.875, 0.375, 0.125, 0.375, 0.875, 0.875, 0.625, 0.875, 0.375, 0.375, 0.625, 0.375, 0.875},
      {0.875, 0.875, 0.125, 0.375, 0.875, 0.625, 0.875, 0.375, 0.375, 0.125, 0.375, 0.875, 0.875, 0.125, 0.875, 0.375},
      {0.625, 0.125, 0.875, 0.625, 0.625, 0.875, 0.125, 0.125, 0.125, 0.375, 0.125, 0.625, 0.125, 0.875, 0.625, 0.625},
      {0.125, 0.625, 0.375, 0.125, 0.125, 0.375, 0.625, 0.625, 0.625, 0.875, 0.625, 0.125, 0.625, 0.375, 0.125, 0.125}};
  const Eigen::MatrixXd p = opt::sobol_points(8, 16);
  int sobol_bad = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 16; ++j) sobol_bad += p(i, j) != want[i][j];
  return {cma_ok == 10 && bo_ok == 10 && sobol_bad == 0,
          fmt("CMA-ES sphere %d/10; BO toy %d/10; Sobol mismatches %d", cma_ok, bo_ok, sobol_bad)};
}

// ---- 6-9: experiments -----------------------------------------------------

std::vector<double> best_so_far(const fs::path& dir, int run, harness::Strategy s) {
  std::ifstream in(dir / "runs" / (harness::run_file_stem(run, s) + ".jsonl"));
  std::vector<double> out;
  double m = 1e300;
  std::string line;
  while (std::getline(in, line)) {
    m = std::min(m, nlohmann::json::parse(line).at("cost").get<double>());
    out.push_back(m);
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs the CLI to completion, returns its exit status.
int cli(const std::vector<std::string>& args) {
  std::string cmd = GAITBO_CLI;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::vector<std::string> experiment_args(const fs::path& store, const fs::path& out) {
  return {"optimize", "--preset", "ci", "--budget", "50", "--store", store.string(), "-o", out.string()};
}

// Starts the CLI, SIGKILLs it once `min_done` jobs have finished.
int killed_run(const std::vector<std::string>& args, const fs::path& out, int min_done) {
  const pid_t pid = fork();
  if (pid == 0) {
    std::vector<char*> argv;
    std::string bin = GAITBO_CLI;
    argv.push_back(bin.data());
    std::vector<std::string> copy = args;
    for (auto& a : copy) argv.push_back(a.data());
    argv.push_back(nullptr);
    if (std::FILE* f = std::freopen("/dev/null", "w", stdout); !f) _exit(126);
    execv(bin.c_str(), argv.data());
    _exit(127);
  }
  int done = 0;
  for (;;) {
    int status = 0;
    if (waitpid(pid, &status, WNOHANG) == pid) return -1;  // finished before the kill
    done = 0;
    if (fs::exists(out / "runs")) {
      for (const auto& e : fs::directory_iterator(out / "runs")) {
        done += e.path().string().ends_with(".result.json");
      }
    }
    if (done >= min_done) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  kill(pid, SIGKILL);
  waitpid(pid, nullptr, 0);
  return done;
}

}  // namespace

int main() {
  const fs::path work = work_dir();
  fs::create_directories(work);
  std::vector<std::pair<int, Outcome>> results;
  auto report = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", limit_s);
    }
    std::printf("criterion %d %-4s %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    results.emplace_back(id, o);
  };

  report(1, "formula exactness", 10, criterion_formulas);
  report(2, "GP correctness", 30, criterion_gp);
  report(3, "kernel PSD", 10, criterion_psd);
  report(4, "physics invariants", 60, criterion_physics);
  report(5, "optimizer sanity", 120, criterion_optimizers);

  const fs::path store_path = work / "store_ci.bin";
  std::shared_ptr<store::FeatureStore> st;
  report(7, "store sparsity", 1200, [&] {
    store::PrecomputeConfig c;
    c.n = 1000;
    c.created = "acceptance";
    st = std::make_shared<store::FeatureStore>(store::precompute(c));
    store::save(*st, store_path);
    const double bar = metrics::max_step_score(c.dog);
    int below = 0;
    for (Eigen::Index i = 0; i < st->phi().size(); ++i) below += st->phi()[i] < bar;
    const double frac = below / 1000.0;
    return Outcome{frac >= 0.9, fmt("%.1f%% of 1000 entries below phi %.1f; %llu faults", 100 * frac, bar,
                                    static_cast<unsigned long long>(st->metadata().faults))};
  });

  const fs::path exp_a = work / "exp_a";
  int exp_status = -1;
  report(6, "headline experiment", 1800, [&] {
    fs::remove_all(exp_a);
    exp_status = cli(experiment_args(store_path, exp_a));
    if (exp_status != 0) return Outcome{false, fmt("optimize exited %d", exp_status)};
    using harness::Strategy;
    std::vector<double> dog50, se50, rnd50;
    int paired = 0;
    bool median_curve = true;
    std::vector<std::vector<double>> dogs, rands;
    for (int r = 0; r < 10; ++r) {
      const auto d = best_so_far(exp_a, r, Strategy::kBoDog);
      const auto e = best_so_far(exp_a, r, Strategy::kBoSe);
      const auto x = best_so_far(exp_a, r, Strategy::kRandom);
      if (d.size() != 50 || e.size() != 50 || x.size() != 50) return Outcome{false, "incomplete histories"};
      dog50.push_back(d[49]);
      se50.push_back(e[49]);
      rnd50.push_back(x[49]);
      bool ok = true;
      for (int t = 19; t < 50; ++t) ok = ok && d[t] <= x[t];
      paired += ok;
      dogs.push_back(d);
      rands.push_back(x);
    }
    for (int t = 19; t < 50; ++t) {
      std::vector<double> a, b;
      for (int r = 0; r < 10; ++r) {
        a.push_back(dogs[r][t]);
        b.push_back(rands[r][t]);
      }
      median_curve = median_curve && median(a) <= median(b);
    }
    const double md = median(dog50), ms = median(se50), mr = median(rnd50);
    const bool pass = md < mr && md < ms && median_curve && paired >= 8;
    return Outcome{pass, fmt("median best at 50: bo-dog %.4f, bo-se %.4f, random %.4f; median curve "
                             "<= random from trial 20: %s; runs <= random from trial 20: %d/10",
                             md, ms, mr, median_curve ? "yes" : "no", paired)};
  });

  report(8, "warm start", 0, [&] {
    if (exp_status != 0) return Outcome{false, "headline experiment did not complete"};
    int wins = 0;
    std::vector<double> warm, cold;
    for (int r = 0; r < 10; ++r) {
      warm.push_back(best_so_far(exp_a, r, harness::Strategy::kCmaesWarm).at(49));
      cold.push_back(best_so_far(exp_a, r, harness::Strategy::kCmaes).at(49));
      wins += warm.back() < cold.back();
    }
    return Outcome{wins >= 7, fmt("warm < cold at trial 50 in %d/10 runs; medians warm %.4f, cold %.4f",
                                  wins, median(warm), median(cold))};
  });

  report(9, "determinism and resume", 0, [&] {
    if (exp_status != 0) return Outcome{false, "headline experiment did not complete"};
    const auto reference = jsonl_bytes(exp_a);
    const fs::path exp_b = work / "exp_b";
    fs::remove_all(exp_b);
    if (cli(experiment_args(store_path, exp_b)) != 0) return Outcome{false, "second run failed"};
    const bool same = jsonl_bytes(exp_b) == reference;

    const fs::path exp_c = work / "exp_c";
    fs::remove_all(exp_c);
    const int done_at_kill = killed_run(experiment_args(store_path, exp_c), exp_c, 20);
    if (cli(experiment_args(store_path, exp_c)) != 0) return Outcome{false, "resumed run failed"};
    const bool resumed = jsonl_bytes(exp_c) == reference;
    const bool summary = slurp(exp_c / "summary.csv") == slurp(exp_a / "summary.csv");
    return Outcome{same && resumed && summary && done_at_kill > 0,
                   fmt("repeat identical: %s (%zu files); killed after %d of 50 jobs, resumed identical: "
                       "%s; summary identical: %s",
                       same ? "yes" : "no", reference.size(), done_at_kill, resumed ? "yes" : "no",
                       summary ? "yes" : "no")};
  });

  int failed = 0;
  for (const auto& [id, o] : results) failed += !o.pass;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
