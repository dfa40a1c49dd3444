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

#ifndef SCATTERBLUR_RBF_INTERP_HPP
#define SCATTERBLUR_RBF_INTERP_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace scatterblur {

/// N scattered locations (one row per point) with one scalar value each.
/// Locations are pairwise distinct.
class MeasurementSet {
 public:
  /// Throws DomainError on shape mismatch or non-finite input and
  /// DuplicateLocationError when two rows coincide.
  MeasurementSet(Eigen::MatrixXd locations, Eigen::VectorXd values);

  const Eigen::MatrixXd& locations() const noexcept { return locations_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  int dim() const noexcept { return static_cast<int>(locations_.cols()); }

  /// Same locations, new values.
  MeasurementSet with_values(Eigen::VectorXd values) const;

 private:
  MeasurementSet(Eigen::MatrixXd locations, Eigen::VectorXd values, bool checked);

  Eigen::MatrixXd locations_;
  Eigen::VectorXd values_;
};

/// Throws DuplicateLocationError if any two rows coincide, DomainError for
/// an empty set or non-finite coordinates.
void validate_locations(const Eigen::MatrixXd& locations);

/// Isotropic d-variate Gaussian density at radius r:
/// (2 pi variance)^{-d/2} exp(-r^2 / (2 variance)).
double gaussian_density(double r, double variance, int dim);

/// Same as gaussian_density but takes the squared radius.
double gaussian_density_sq(double r2, double variance, int dim);

/// Gaussian RBF psi(r) = phi(r; 0, xi I). Stores the variance xi.
class RbfBasis {
 public:
  RbfBasis(double variance, int dim);
  /// Interfaces report the standard deviation xi^{1/2}.
  static RbfBasis from_sd(double sd, int dim) { return RbfBasis(sd * sd, dim); }

  double variance() const noexcept { return variance_; }
  double sd() const noexcept;
  int dim() const noexcept { return dim_; }

  double operator()(double r) const { return gaussian_density(r, variance_, dim_); }
  double eval_sq(double r2) const { return gaussian_density_sq(r2, variance_, dim_); }

 private:
  double variance_;
  int dim_;
};

/// B_ij = psi(||q_i - q_j||).
Eigen::MatrixXd build_matrix(const Eigen::MatrixXd& locations, const RbfBasis& basis);

struct SolverOptions {
  /// Bound on ||B b - z||_inf / ||z||_inf.
  double residual_tolerance = 1e-8;
  int refinement_steps = 1;
};

/// Solves the symmetric positive definite RBF system B b = z. Dense Cholesky
/// is the only implementation; the interface exists so that O(N) solvers can
/// be substituted.
class RbfSolver {
 public:
  virtual ~RbfSolver() = default;

  /// Solves for every column of `rhs`. Throws ConditioningError when the
  /// residual check fails for any column.
  virtual Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const = 0;
  /// Solves without the residual check (used for well-behaved right-hand sides
  /// whose solutions are checked by the caller).
  virtual Eigen::MatrixXd solve_unchecked(const Eigen::MatrixXd& rhs) const = 0;
  virtual std::size_t size() const noexcept = 0;
  /// Diagonal shift that was needed to factor the matrix, 0 if none.
  virtual double jitter() const noexcept = 0;
};

/// Dense Cholesky factorization. If the plain factorization fails it retries
/// once with jitter 1e-12 * B_00 on the diagonal.
class CholeskySolver final : public RbfSolver {
 public:
  /// Throws ConditioningError when the matrix cannot be factored.
  explicit CholeskySolver(Eigen::MatrixXd matrix, SolverOptions options = {});

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const override;
  Eigen::MatrixXd solve_unchecked(const Eigen::MatrixXd& rhs) const override;
  std::size_t size() const noexcept override {
    return static_cast<std::size_t>(matrix_.rows());
  }
  double jitter() const noexcept override { return jitter_; }

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  SolverOptions options_;
  double jitter_ = 0.0;
};

/// zeta(x) = sum_j b_j psi(||x - q_j||).
struct Interpolant {
  RbfBasis basis;
  Eigen::MatrixXd centers;
  Eigen::VectorXd weights;
};

/// Solves B b = z for the interpolation weights.
Interpolant solve_weights(const MeasurementSet& ms, const RbfBasis& basis,
                          const SolverOptions& options = {});

/// Evaluates the interpolant at x. Throws DomainError on dimension mismatch.
double eval_interpolant(const Interpolant& itp, std::span<const double> x);
double eval_interpolant(const Interpolant& itp, const Eigen::VectorXd& x);

/// Greedy thinning in input order: a point is kept iff it is at least
/// `min_sep` away from every point kept before it. Returns kept indices.
std::vector<std::size_t> thin_indices(const Eigen::MatrixXd& locations, double min_sep);

MeasurementSet thin_points(const MeasurementSet& ms, double min_sep);

struct Detrended {
  MeasurementSet deviations;
  /// (a_0, a_1, ..., a_d) of z ~ a_0 + sum_i a_i x_i.
  Eigen::VectorXd trend;
};

/// Least-squares linear fit and residuals. Throws RankDeficientError when
/// the locations are affinely degenerate or N < d + 1.
Detrended detrend_linear(const MeasurementSet& ms);

/// Evaluates a trend from detrend_linear at each row of `locations`.
Eigen::VectorXd eval_trend(const Eigen::VectorXd& trend, const Eigen::MatrixXd& locations);

/// Distance from each point to its nearest neighbour (N >= 2).
Eigen::VectorXd nearest_neighbor_distances(const Eigen::MatrixXd& locations);

/// Mean nearest-neighbour distance, a starting point for choosing the RBF
/// standard deviation. Never applied automatically.
double mean_nearest_neighbor_distance(const Eigen::MatrixXd& locations);

}  // namespace scatterblur

#endif  // SCATTERBLUR_RBF_INTERP_HPP
