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

#ifndef SCATTERBLUR_BLUR_OP_HPP
#define SCATTERBLUR_BLUR_OP_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "scatterblur/kernel_approx.hpp"
#include "scatterblur/rbf_interp.hpp"

namespace scatterblur {

struct BlurConfig {
  /// ell = 0 selects the identity operator (no blurring).
  HelmholtzParams helmholtz{1.0, 1.0};
  QuadratureParams quadrature{};
  /// RBF standard deviation xi^{1/2}.
  double rbf_sd = 1.0;
  /// Rescale S -> S / ||S 1|| with 1 the unit-norm constant vector.
  bool normalize = false;
  SolverOptions solver{};
  /// Blurred-kernel values are precomputed when N is at most this.
  std::size_t cache_limit = 4096;

  void validate() const;
  bool is_identity() const noexcept { return helmholtz.ell == 0.0; }
};

/// Blurred basis function psi~(r) = sum_n c_n phi(r; 0, (rho_n + xi) I), the
/// convolution of the Green's mixture with the RBF kernel. Terms are summed
/// pairwise in order of increasing rho_n.
class BlurredKernel {
 public:
  BlurredKernel(const GreenMixture& mixture, const RbfBasis& basis);

  double operator()(double r) const { return eval_sq(r * r); }
  double eval_sq(double r2) const;
  std::size_t size() const noexcept { return coef_.size(); }

 private:
  std::vector<double> coef_;     // c_n (2 pi (rho_n + xi))^{-d/2}
  std::vector<double> two_var_;  // 2 (rho_n + xi)
};

double blurred_kernel(const GreenMixture& mixture, const RbfBasis& basis, double r);

/// out_i = sum_j w_j psi~(||q_i - q_j||) over the operator's locations. Fast
/// summation backends (FGT and relatives) would implement this interface.
class KernelSummation {
 public:
  virtual ~KernelSummation() = default;
  virtual Eigen::VectorXd sum(const Eigen::VectorXd& weights) const = 0;
  /// psi~(||q_i - q_j||) for every pair.
  virtual Eigen::MatrixXd matrix() const = 0;
};

/// Evaluates the blurred kernel on the fly: O(N^2 M) per call, O(N) memory.
class DirectKernelSummation final : public KernelSummation {
 public:
  DirectKernelSummation(Eigen::MatrixXd locations, std::shared_ptr<const BlurredKernel> kernel);
  Eigen::VectorXd sum(const Eigen::VectorXd& weights) const override;
  Eigen::MatrixXd matrix() const override;

 private:
  Eigen::MatrixXd locations_;
  std::shared_ptr<const BlurredKernel> kernel_;
};

/// Precomputes the N x N blurred-kernel matrix once. Produces the same
/// values, in the same summation order, as DirectKernelSummation.
class CachedKernelSummation final : public KernelSummation {
 public:
  explicit CachedKernelSummation(const DirectKernelSummation& direct);
  Eigen::VectorXd sum(const Eigen::VectorXd& weights) const override;
  Eigen::MatrixXd matrix() const override { return values_; }

 private:
  Eigen::MatrixXd values_;
};

/// The blur S = B~ B^{-1} bound to a set of locations. Immutable and cheap to
/// copy; the factorization of B is shared between copies.
class BlurOperator {
 public:
  /// Builds the Green's mixture, factors B eagerly and computes ||S_0 1||.
  /// Throws DomainError for invalid configuration or locations and
  /// ConditioningError when B cannot be factored.
  static BlurOperator prepare(const BlurConfig& config, const Eigen::MatrixXd& locations);

  const BlurConfig& config() const noexcept { return config_; }
  bool is_identity() const noexcept { return config_.is_identity(); }
  const std::optional<GreenMixture>& mixture() const noexcept { return mixture_; }
  const Eigen::MatrixXd& locations() const noexcept { return locations_; }
  const RbfBasis& basis() const noexcept { return basis_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(locations_.rows()); }
  int dim() const noexcept { return static_cast<int>(locations_.cols()); }

  /// Divisor applied to every output: ||S_0 1|| when normalizing, else 1.
  double norm_factor() const noexcept { return norm_factor_; }
  /// ||S_0 1||_2 of the unnormalized operator (1 for the identity).
  double constant_response_norm() const noexcept { return constant_response_; }
  /// Diagonal jitter used to factor B (0 if none or identity).
  double jitter() const noexcept;

  /// z~ = S z. Throws ConditioningError if B b = z cannot be solved to tolerance.
  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;
  /// Applies S to every column.
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& z) const;

  /// B (requires a non-identity operator).
  const Eigen::MatrixXd& rbf_matrix() const;
  /// B~ (requires a non-identity operator).
  Eigen::MatrixXd blurred_matrix() const;
  const RbfSolver& solver() const;
  const BlurredKernel& kernel() const;

 private:
  BlurOperator(BlurConfig config, Eigen::MatrixXd locations, RbfBasis basis)
      : config_(std::move(config)), locations_(std::move(locations)), basis_(basis) {}

  Eigen::VectorXd apply_unnormalized(const Eigen::VectorXd& z) const;

  BlurConfig config_;
  Eigen::MatrixXd locations_;
  RbfBasis basis_;
  std::optional<GreenMixture> mixture_;
  std::shared_ptr<const CholeskySolver> solver_;
  std::shared_ptr<const BlurredKernel> kernel_;
  std::shared_ptr<const KernelSummation> summation_;
  double norm_factor_ = 1.0;
  double constant_response_ = 1.0;
};

struct DenseOptions {
  std::size_t max_size = 5000;
  bool allow_large = false;
};

/// Materializes S = B~ B^{-1} / norm_factor. Throws GuardError when N exceeds
/// the guard and allow_large is off.
Eigen::MatrixXd dense_matrix(const BlurOperator& op, const DenseOptions& options = {});

/// Eigenvalues of the symmetric-definite pencil B~ v = lambda B v (scaled by
/// 1/norm_factor), ascending. These are the eigenvalues of S.
Eigen::VectorXd generalized_eigenvalues(const BlurOperator& op,
                                        const DenseOptions& options = {});

/// Blurred interpolant sum_j b_j psi~(||x - q_j||) / norm_factor at arbitrary
/// target rows, with B b = z. For the identity operator this is the plain
/// RBF interpolant.
Eigen::VectorXd eval_blurred(const BlurOperator& op, const Eigen::VectorXd& z,
                             const Eigen::MatrixXd& targets);

struct ScaleSeparation {
  Eigen::VectorXd deviations;  ///< input after optional detrending
  Eigen::VectorXd large;       ///< S deviations
  Eigen::VectorXd small;       ///< deviations - large
  Eigen::VectorXd trend;       ///< (a_0, ..., a_d); zeros when detrending is off
};

/// Splits data into large and small scales. The trend is returned but never
/// added back. `op` must have been prepared on ms.locations().
ScaleSeparation scale_separate(const BlurOperator& op, const MeasurementSet& ms, bool detrend);

}  // namespace scatterblur

#endif  // SCATTERBLUR_BLUR_OP_HPP
