// Copyright 2026 The scatterblur Authors
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

#ifndef SCATTERBLUR_ASSIMILATION_HPP
#define SCATTERBLUR_ASSIMILATION_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>

#include "scatterblur/blur_op.hpp"

namespace scatterblur {

/// Forecast ensemble at the observation locations. `members` holds one
/// member per column (N rows, N_e columns).
class Ensemble {
 public:
  /// Throws DomainError on size mismatch, non-finite values or obs_sd <= 0.
  Ensemble(Eigen::MatrixXd members, Eigen::VectorXd obs, Eigen::VectorXd obs_sd);

  const Eigen::MatrixXd& members() const noexcept { return members_; }
  const Eigen::VectorXd& obs() const noexcept { return obs_; }
  const Eigen::VectorXd& obs_sd() const noexcept { return obs_sd_; }
  Eigen::Index size() const noexcept { return obs_.size(); }
  Eigen::Index member_count() const noexcept { return members_.cols(); }

 private:
  Eigen::MatrixXd members_;
  Eigen::VectorXd obs_;
  Eigen::VectorXd obs_sd_;
};

struct WeightSet {
  Eigen::VectorXd weights;      ///< normalized, sum to 1
  Eigen::VectorXd log_weights;  ///< unnormalized log-weights
  double ess = 0.0;
  double sigma = 1.0;
  std::optional<std::string> warning;
};

/// Column i is (y - Hx^(i)) / obs_sd elementwise.
Eigen::MatrixXd standardized_innovations(const Ensemble& ens);

/// 1 / sum w_i^2 for normalized weights.
double ess(std::span<const double> weights);
double ess(const Eigen::VectorXd& weights);

/// Normalizes log-weights by subtracting the maximum before exponentiating.
WeightSet normalize_log_weights(Eigen::VectorXd log_weights, double sigma = 1.0);

/// Importance weights with blurred standardized innovations:
/// log w_i = -||S R0^{-1/2}(y - Hx^(i))||^2 / (2 sigma), sigma = ||S_0 1||^2.
/// `op` should be unnormalized; for a normalized operator sigma is taken as 1
/// and the result carries a warning.
WeightSet sir_weights(const Ensemble& ens, const BlurOperator& op);

struct CovarianceReport {
  double min_eigenvalue = 0.0;  ///< of S^T S
  double max_eigenvalue = 0.0;
  bool symmetric = false;
  bool positive_definite = false;
};

/// Checks that S^T S is symmetric positive definite, so (S^T S)^{-1} is a
/// valid observation-error correlation matrix.
CovarianceReport implied_covariance_check(const BlurOperator& op,
                                          const DenseOptions& options = {});

}  // namespace scatterblur

#endif  // SCATTERBLUR_ASSIMILATION_HPP
