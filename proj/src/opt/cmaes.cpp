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

#include "gaitbo/opt/cmaes.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gaitbo/errors.h"
#include "gaitbo/random.h"

namespace gaitbo::opt {

int default_lambda(int dim) { return 4 + static_cast<int>(std::floor(3.0 * std::log(dim))); }

namespace {

bool in_unit_box(const Eigen::VectorXd& y) { return (y.array() >= 0.0).all() && (y.array() <= 1.0).all(); }

}  // namespace

OptRun run_cmaes(const Objective& f, const Box& box, const Eigen::VectorXd& init, double sigma,
                 int budget, std::uint64_t seed, const CmaesOptions& opts) {
  box.validate();
  if (budget < 1) throw ParameterError("budget must be at least 1");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!box.contains(init)) throw ParameterError("initial point outside the box");

  const int n = box.dim();
  const int lambda = opts.lambda > 0 ? opts.lambda : default_lambda(n);
  const int mu = lambda / 2;
  Eigen::VectorXd w(mu);
  for (int i = 0; i < mu; ++i) w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  w /= w.sum();
  const double mueff = 1.0 / w.squaredNorm();

  const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
  const double cs = (mueff + 2.0) / (n + mueff + 5.0);
  const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
  const double cmu =
      std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0) * (n + 2.0) + mueff));
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
  const double chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  Rng rng(seed);

  Eigen::VectorXd mean = box.to_unit(init);
  Eigen::VectorXd pc = Eigen::VectorXd::Zero(n), ps = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd dvec = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd inv_sqrt_c = Eigen::MatrixXd::Identity(n, n);

  OptRun run;
  run.strategy = opts.strategy;
  run.seed = seed;
  run.budget = budget;

  int generation = 0;
  std::vector<Eigen::VectorXd> ys(lambda);
  std::vector<double> costs(lambda);
  while (!run.done()) {
    const int count = std::min(lambda, budget - static_cast<int>(run.history.size()));
    for (int k = 0; k < count; ++k) {
      Eigen::VectorXd y;
      for (int attempt = 0; attempt <= opts.max_resample; ++attempt) {
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z[i] = normal01(rng);
        y = mean + sigma * (b * dvec.cwiseProduct(z));
        if (in_unit_box(y)) break;
      }
      y = y.cwiseMax(0.0).cwiseMin(1.0);
      ys[k] = y;
      costs[k] = evaluate(run, f, box.from_unit(y), opts.eval);
    }
    if (count < lambda) break;
    ++generation;

    std::vector<int> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b2) { return costs[a] < costs[b2]; });

    const Eigen::VectorXd old_mean = mean;
    mean.setZero();
    for (int i = 0; i < mu; ++i) mean += w[i] * ys[order[i]];

    const Eigen::VectorXd step = (mean - old_mean) / sigma;
    ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (inv_sqrt_c * step);
    const double ps_norm = ps.norm();
    const double hsig_lhs = ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * generation)) / chi_n;
    const bool hsig = hsig_lhs < 1.4 + 2.0 / (n + 1.0);
    pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * step;

    Eigen::MatrixXd artmp(n, mu);
    for (int i = 0; i < mu; ++i) artmp.col(i) = (ys[order[i]] - old_mean) / sigma;
    const double hsig_fix = hsig ? 0.0 : cc * (2.0 - cc);
    c = (1.0 - c1 - cmu) * c + c1 * (pc * pc.transpose() + hsig_fix * c) +
        cmu * artmp * w.asDiagonal() * artmp.transpose();
    c = 0.5 * (c + c.transpose()).eval();

    sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));
    sigma = std::clamp(sigma, 1e-14, 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(1e-20);
    if (ev.maxCoeff() / ev.minCoeff() > 1e14) {
      c.setIdentity();
      ev.setOnes();
      b.setIdentity();
    } else {
      b = eig.eigenvectors();
    }
    dvec = ev.cwiseSqrt();
    inv_sqrt_c = b * dvec.cwiseInverse().asDiagonal() * b.transpose();
  }
  return run;
}

}  // namespace gaitbo::opt
