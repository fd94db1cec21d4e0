// Copyright 2026 The dynscene Authors
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

#include "dynscene/cmaes.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "dynscene/errors.h"

namespace dynscene {

Cmaes::Cmaes(const Eigen::VectorXd& mean, double sigma, int lambda, uint64_t seed)
    : lambda_(lambda), mean_(mean), sigma_(sigma), rng_(seed) {
  const int n = static_cast<int>(mean.size());
  if (n < 1) throw DomainError("CMA-ES needs at least one free parameter");
  if (lambda < 2) throw DomainError("population size must be at least 2");
  if (!(sigma > 0.0)) throw DomainError("initial step size must be positive");

  mu_ = lambda / 2;
  weights_.resize(mu_);
  for (int i = 0; i < mu_; ++i) weights_[i] = std::log(mu_ + 0.5) - std::log(i + 1.0);
  weights_ /= weights_.sum();
  mu_eff_ = 1.0 / weights_.squaredNorm();

  const double dn = n;
  c_sigma_ = (mu_eff_ + 2.0) / (dn + mu_eff_ + 5.0);
  d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (dn + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = (4.0 + mu_eff_ / dn) / (dn + 4.0 + 2.0 * mu_eff_ / dn);
  c_1_ = 2.0 / ((dn + 1.3) * (dn + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_,
                   2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) / ((dn + 2.0) * (dn + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

  cov_ = Eigen::MatrixXd::Identity(n, n);
  basis_ = Eigen::MatrixXd::Identity(n, n);
  eigenvalues_ = Eigen::VectorXd::Ones(n);
  p_sigma_ = Eigen::VectorXd::Zero(n);
  p_c_ = Eigen::VectorXd::Zero(n);
}

std::vector<Eigen::VectorXd> Cmaes::Ask() {
  const int n = dimension();
  const Eigen::VectorXd scale = eigenvalues_.cwiseSqrt();
  std::vector<Eigen::VectorXd> population;
  population.reserve(lambda_);
  for (int k = 0; k < lambda_; ++k) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal_(rng_);
    population.push_back(mean_ + sigma_ * (basis_ * scale.cwiseProduct(z)));
  }
  return population;
}

void Cmaes::Tell(const std::vector<Eigen::VectorXd>& population,
                 const std::vector<double>& fitness) {
  if (static_cast<int>(population.size()) != lambda_ ||
      static_cast<int>(fitness.size()) != lambda_) {
    throw DomainError("population size mismatch");
  }
  const int n = dimension();
  std::vector<int> order(lambda_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fitness[a] > fitness[b]; });

  const Eigen::VectorXd old_mean = mean_;
  Eigen::MatrixXd steps(n, mu_);
  mean_.setZero();
  for (int i = 0; i < mu_; ++i) {
    mean_ += weights_[i] * population[order[i]];
    steps.col(i) = (population[order[i]] - old_mean) / sigma_;
  }
  const Eigen::VectorXd y_w = (mean_ - old_mean) / sigma_;

  // C^{-1/2} y_w through the eigendecomposition.
  const Eigen::VectorXd inv_sqrt = eigenvalues_.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd whitened = basis_ * inv_sqrt.cwiseProduct(basis_.transpose() * y_w);
  p_sigma_ = (1.0 - c_sigma_) * p_sigma_ +
             std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * whitened;

  ++generation_;
  const double ps_norm = p_sigma_.norm();
  const double correction =
      std::sqrt(1.0 - std::pow(1.0 - c_sigma_, 2.0 * generation_));
  const bool h_sigma = ps_norm / correction / chi_n_ < 1.4 + 2.0 / (n + 1.0);
  p_c_ = (1.0 - c_c_) * p_c_ +
         (h_sigma ? std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) : 0.0) * y_w;

  Eigen::MatrixXd rank_mu = steps * weights_.asDiagonal() * steps.transpose();
  const double delta_h = h_sigma ? 0.0 : c_c_ * (2.0 - c_c_);
  cov_ = (1.0 - c_1_ - c_mu_ + c_1_ * delta_h) * cov_ + c_1_ * p_c_ * p_c_.transpose() +
         c_mu_ * rank_mu;

  sigma_ *= std::exp((c_sigma_ / d_sigma_) * (ps_norm / chi_n_ - 1.0));
  Decompose();
}

void Cmaes::Decompose() {
  cov_ = 0.5 * (cov_ + cov_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov_);
  if (solver.info() != Eigen::Success) throw DomainError("covariance decomposition failed");
  basis_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues().cwiseMax(kEigenFloor);
  cov_ = basis_ * eigenvalues_.asDiagonal() * basis_.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose());
}

}  // namespace dynscene
