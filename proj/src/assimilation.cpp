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

#include "scatterblur/assimilation.hpp"

#include <cmath>
#include <string>

#include "scatterblur/errors.hpp"
#include "scatterblur/summation.hpp"

namespace scatterblur {

Ensemble::Ensemble(Eigen::MatrixXd members, Eigen::VectorXd obs, Eigen::VectorXd obs_sd)
    : members_(std::move(members)), obs_(std::move(obs)), obs_sd_(std::move(obs_sd)) {
  if (obs_.size() == 0) throw DomainError("ensemble has no observations");
  if (members_.cols() == 0) throw DomainError("ensemble has no members");
  if (members_.rows() != obs_.size() || obs_sd_.size() != obs_.size()) {
    throw DomainError("ensemble members, observations and obs_sd must have equal length");
  }
  if (!members_.allFinite() || !obs_.allFinite() || !obs_sd_.allFinite()) {
    throw DomainError("ensemble contains non-finite values");
  }
  if ((obs_sd_.array() <= 0.0).any()) {
    throw DomainError("observation standard deviations must be positive");
  }
}

Eigen::MatrixXd standardized_innovations(const Ensemble& ens) {
  Eigen::MatrixXd out(ens.size(), ens.member_count());
  for (Eigen::Index i = 0; i < ens.member_count(); ++i) {
    out.col(i) = ((ens.obs() - ens.members().col(i)).array() / ens.obs_sd().array()).matrix();
  }
  return out;
}

double ess(std::span<const double> weights) {
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  return 1.0 / pairwise_sum(sq);
}

double ess(const Eigen::VectorXd& weights) {
  return ess(std::span<const double>(weights.data(), static_cast<std::size_t>(weights.size())));
}

WeightSet normalize_log_weights(Eigen::VectorXd log_weights, double sigma) {
  if (log_weights.size() == 0) throw DomainError("no weights to normalize");
  if (!log_weights.allFinite()) throw DomainError("log-weights must be finite");
  WeightSet out;
  out.sigma = sigma;
  const double shift = log_weights.maxCoeff();
  Eigen::VectorXd w = (log_weights.array() - shift).exp().matrix();
  const double total = pairwise_sum(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
  w /= total;
  out.ess = ess(w);
  out.weights = std::move(w);
  out.log_weights = std::move(log_weights);
  return out;
}

WeightSet sir_weights(const Ensemble& ens, const BlurOperator& op) {
  if (static_cast<std::size_t>(ens.size()) != op.size()) {
    throw DomainError("ensemble and operator have different numbers of observations");
  }
  double sigma = 1.0;
  std::optional<std::string> warning;
  if (op.config().normalize && !op.is_identity()) {
    warning = "operator is normalized; using sigma = 1 to avoid normalizing twice";
  } else {
    const double s1 = op.constant_response_norm();
    sigma = s1 * s1;
  }
  const Eigen::MatrixXd blurred = op.apply_columns(standardized_innovations(ens));
  Eigen::VectorXd log_w(ens.member_count());
  for (Eigen::Index i = 0; i < ens.member_count(); ++i) {
    log_w(i) = -blurred.col(i).squaredNorm() / (2.0 * sigma);
  }
  WeightSet out = normalize_log_weights(std::move(log_w), sigma);
  out.warning = std::move(warning);
  return out;
}

CovarianceReport implied_covariance_check(const BlurOperator& op, const DenseOptions& options) {
  const Eigen::MatrixXd s = dense_matrix(op, options);
  const Eigen::Index n = s.cols();
  // filled from one triangle, so symmetric by construction
  Eigen::MatrixXd sts(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = s.col(i).dot(s.col(j));
      sts(i, j) = v;
      sts(j, i) = v;
    }
  }
  CovarianceReport report;
  report.symmetric = (sts.array() == sts.transpose().array()).all();
  Eigen::LLT<Eigen::MatrixXd> llt(sts);
  report.positive_definite = llt.info() == Eigen::Success;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sts, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.max_eigenvalue = eig.eigenvalues().maxCoeff();
  return report;
}

}  // namespace scatterblur
