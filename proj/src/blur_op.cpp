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

#include "scatterblur/blur_op.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "scatterblur/errors.hpp"
#include "scatterblur/summation.hpp"

namespace scatterblur {

void BlurConfig::validate() const {
  if (!(rbf_sd > 0.0) || !std::isfinite(rbf_sd)) {
    throw DomainError("rbf_sd must be finite and positive");
  }
  if (!(helmholtz.ell >= 0.0) || !std::isfinite(helmholtz.ell)) {
    throw DomainError("ell must be finite and non-negative");
  }
  if (!is_identity()) helmholtz.validate();
  quadrature.validate();
  if (!(solver.residual_tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
}

BlurredKernel::BlurredKernel(const GreenMixture& mixture, const RbfBasis& basis) {
  if (mixture.dim() != basis.dim()) throw DomainError("mixture and basis dimensions differ");
  const double half_d = 0.5 * basis.dim();
  coef_.reserve(mixture.size());
  two_var_.reserve(mixture.size());
  for (const auto& t : mixture.terms()) {
    const double var = t.variance + basis.variance();
    coef_.push_back(t.weight * std::pow(2.0 * std::numbers::pi * var, -half_d));
    two_var_.push_back(2.0 * var);
  }
}

double BlurredKernel::eval_sq(double r2) const {
  constexpr std::size_t kStack = 128;
  const std::size_t m = coef_.size();
  auto fill = [&](double* out) {
    for (std::size_t n = 0; n < m; ++n) out[n] = coef_[n] * std::exp(-r2 / two_var_[n]);
  };
  if (m <= kStack) {
    std::array<double, kStack> buf;
    fill(buf.data());
    return pairwise_sum(std::span<const double>(buf.data(), m));
  }
  std::vector<double> buf(m);
  fill(buf.data());
  return pairwise_sum(buf);
}

double blurred_kernel(const GreenMixture& mixture, const RbfBasis& basis, double r) {
  return BlurredKernel(mixture, basis)(r);
}

DirectKernelSummation::DirectKernelSummation(Eigen::MatrixXd locations,
                                             std::shared_ptr<const BlurredKernel> kernel)
    : locations_(std::move(locations)), kernel_(std::move(kernel)) {}

Eigen::VectorXd DirectKernelSummation::sum(const Eigen::VectorXd& weights) const {
  const Eigen::Index n = locations_.rows();
  if (weights.size() != n) throw DomainError("weight vector has wrong length");
  Eigen::VectorXd out(n);
  std::vector<double> parts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r2 = (locations_.row(i) - locations_.row(j)).squaredNorm();
      parts[static_cast<std::size_t>(j)] = weights(j) * kernel_->eval_sq(r2);
    }
    out(i) = pairwise_sum(parts);
  }
  return out;
}

Eigen::MatrixXd DirectKernelSummation::matrix() const {
  const Eigen::Index n = locations_.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = kernel_->eval_sq(0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = kernel_->eval_sq((locations_.row(i) - locations_.row(j)).squaredNorm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

CachedKernelSummation::CachedKernelSummation(const DirectKernelSummation& direct)
    : values_(direct.matrix()) {}

Eigen::VectorXd CachedKernelSummation::sum(const Eigen::VectorXd& weights) const {
  const Eigen::Index n = values_.rows();
  if (weights.size() != n) throw DomainError("weight vector has wrong length");
  Eigen::VectorXd out(n);
  std::vector<double> parts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    // column i equals row i (symmetric) and is contiguous
    const auto col = values_.col(i);
    for (Eigen::Index j = 0; j < n; ++j) parts[static_cast<std::size_t>(j)] = weights(j) * col(j);
    out(i) = pairwise_sum(parts);
  }
  return out;
}

BlurOperator BlurOperator::prepare(const BlurConfig& config, const Eigen::MatrixXd& locations) {
  config.validate();
  validate_locations(locations);
  const int d = static_cast<int>(locations.cols());
  BlurOperator op(config, locations, RbfBasis::from_sd(config.rbf_sd, d));
  if (config.is_identity()) return op;

  op.mixture_ = gaussian_bsh(config.helmholtz, config.quadrature, d);
  op.solver_ = std::make_shared<const CholeskySolver>(build_matrix(locations, op.basis_),
                                                      config.solver);
  op.kernel_ = std::make_shared<const BlurredKernel>(*op.mixture_, op.basis_);
  DirectKernelSummation direct(locations, op.kernel_);
  if (op.size() <= config.cache_limit) {
    op.summation_ = std::make_shared<const CachedKernelSummation>(direct);
  } else {
    op.summation_ = std::make_shared<const DirectKernelSummation>(std::move(direct));
  }

  const auto n = static_cast<Eigen::Index>(op.size());
  const Eigen::VectorXd unit = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  op.constant_response_ = op.apply_unnormalized(unit).norm();
  if (config.normalize) op.norm_factor_ = op.constant_response_;
  return op;
}

double BlurOperator::jitter() const noexcept { return solver_ ? solver_->jitter() : 0.0; }

Eigen::VectorXd BlurOperator::apply_unnormalized(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd b = solver_->solve(z);
  return summation_->sum(b);
}

Eigen::VectorXd BlurOperator::apply(const Eigen::VectorXd& z) const {
  if (static_cast<std::size_t>(z.size()) != size()) {
    throw DomainError("input has length " + std::to_string(z.size()) + ", operator expects " +
                      std::to_string(size()));
  }
  if (is_identity()) return z;
  Eigen::VectorXd out = apply_unnormalized(z);
  if (norm_factor_ != 1.0) out /= norm_factor_;
  return out;
}

Eigen::MatrixXd BlurOperator::apply_columns(const Eigen::MatrixXd& z) const {
  if (static_cast<std::size_t>(z.rows()) != size()) throw DomainError("input has wrong length");
  if (is_identity()) return z;
  const Eigen::MatrixXd b = solver_->solve(z);
  Eigen::MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    out.col(c) = summation_->sum(b.col(c));
    if (norm_factor_ != 1.0) out.col(c) /= norm_factor_;
  }
  return out;
}

const RbfSolver& BlurOperator::solver() const {
  if (!solver_) throw DomainError("identity operator has no RBF solver");
  return *solver_;
}

const Eigen::MatrixXd& BlurOperator::rbf_matrix() const {
  if (!solver_) throw DomainError("identity operator has no RBF matrix");
  return solver_->matrix();
}

Eigen::MatrixXd BlurOperator::blurred_matrix() const {
  if (!summation_) throw DomainError("identity operator has no blurred matrix");
  return summation_->matrix();
}

const BlurredKernel& BlurOperator::kernel() const {
  if (!kernel_) throw DomainError("identity operator has no blurred kernel");
  return *kernel_;
}

namespace {

void check_guard(const BlurOperator& op, const DenseOptions& options) {
  if (op.size() > options.max_size && !options.allow_large) {
    throw GuardError("refusing to materialize a dense " + std::to_string(op.size()) + "x" +
                     std::to_string(op.size()) + " matrix (guard " +
                     std::to_string(options.max_size) + "); override to proceed");
  }
}

}  // namespace

Eigen::MatrixXd dense_matrix(const BlurOperator& op, const DenseOptions& options) {
  check_guard(op, options);
  const auto n = static_cast<Eigen::Index>(op.size());
  if (op.is_identity()) return Eigen::MatrixXd::Identity(n, n);
  // S^T = B^{-1} B~ since both kernel matrices are symmetric
  const Eigen::MatrixXd st = op.solver().solve(op.blurred_matrix());
  Eigen::MatrixXd s = st.transpose();
  if (op.norm_factor() != 1.0) s /= op.norm_factor();
  return s;
}

Eigen::VectorXd generalized_eigenvalues(const BlurOperator& op, const DenseOptions& options) {
  check_guard(op, options);
  const auto n = static_cast<Eigen::Index>(op.size());
  if (op.is_identity()) return Eigen::VectorXd::Ones(n);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      op.blurred_matrix(), op.rbf_matrix(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw ConditioningError("generalized eigensolve of (B~, B) failed");
  }
  return ges.eigenvalues() / op.norm_factor();
}

Eigen::VectorXd eval_blurred(const BlurOperator& op, const Eigen::VectorXd& z,
                             const Eigen::MatrixXd& targets) {
  if (static_cast<std::size_t>(z.size()) != op.size()) throw DomainError("input has wrong length");
  if (targets.cols() != op.locations().cols()) throw DomainError("target dimension mismatch");
  if (op.is_identity()) {
    const Interpolant itp =
        solve_weights(MeasurementSet(op.locations(), z), op.basis(), op.config().solver);
    Eigen::VectorXd out(targets.rows());
    for (Eigen::Index t = 0; t < targets.rows(); ++t) {
      out(t) = eval_interpolant(itp, Eigen::VectorXd(targets.row(t).transpose()));
    }
    return out;
  }
  const Eigen::VectorXd b = op.solver().solve(z);
  const Eigen::MatrixXd& q = op.locations();
  Eigen::VectorXd out(targets.rows());
  std::vector<double> parts(static_cast<std::size_t>(q.rows()));
  for (Eigen::Index t = 0; t < targets.rows(); ++t) {
    for (Eigen::Index j = 0; j < q.rows(); ++j) {
      parts[static_cast<std::size_t>(j)] =
          b(j) * op.kernel().eval_sq((targets.row(t) - q.row(j)).squaredNorm());
    }
    out(t) = pairwise_sum(parts) / op.norm_factor();
  }
  return out;
}

ScaleSeparation scale_separate(const BlurOperator& op, const MeasurementSet& ms, bool detrend) {
  if (ms.size() != op.size() || ms.locations() != op.locations()) {
    throw DomainError("scale_separate: operator was prepared on different locations");
  }
  ScaleSeparation out;
  if (detrend) {
    Detrended dt = detrend_linear(ms);
    out.deviations = dt.deviations.values();
    out.trend = std::move(dt.trend);
  } else {
    out.deviations = ms.values();
    out.trend = Eigen::VectorXd::Zero(ms.dim() + 1);
  }
  out.large = op.apply(out.deviations);
  out.small = out.deviations - out.large;
  return out;
}

}  // namespace scatterblur
