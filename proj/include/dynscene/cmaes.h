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

#ifndef DYNSCENE_CMAES_H_
#define DYNSCENE_CMAES_H_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace dynscene {

// (mu/mu_w, lambda) CMA-ES maximizing a black-box objective, with the
// default strategy parameters of Hansen's tutorial: log-decreasing
// recombination weights over the best lambda/2 samples, rank-one plus
// rank-mu covariance update and cumulative step-size adaptation.
class Cmaes {
 public:
  Cmaes(const Eigen::VectorXd& mean, double sigma, int lambda, uint64_t seed);

  // Draws the next population.
  std::vector<Eigen::VectorXd> Ask();
  // Updates the distribution from the population returned by the last Ask
  // and its fitness values (higher is better). Ties rank by index.
  void Tell(const std::vector<Eigen::VectorXd>& population,
            const std::vector<double>& fitness);

  int dimension() const { return static_cast<int>(mean_.size()); }
  int lambda() const { return lambda_; }
  int mu() const { return mu_; }
  int generation() const { return generation_; }
  double sigma() const { return sigma_; }
  double mu_eff() const { return mu_eff_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double min_eigenvalue() const { return eigenvalues_.minCoeff(); }

  static constexpr double kEigenFloor = 1e-12;

 private:
  void Decompose();

  int lambda_;
  int mu_;
  Eigen::VectorXd weights_;
  double mu_eff_;
  double c_sigma_, d_sigma_, c_c_, c_1_, c_mu_, chi_n_;

  Eigen::VectorXd mean_;
  double sigma_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd basis_;        // eigenvectors of cov_
  Eigen::VectorXd eigenvalues_;  // floored
  Eigen::VectorXd p_sigma_, p_c_;
  int generation_ = 0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dynscene

#endif  // DYNSCENE_CMAES_H_
