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

#include "scatterblur/rbf_interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatterblur/errors.hpp"
#include "scatterblur/summation.hpp"

namespace scatterblur {

void validate_locations(const Eigen::MatrixXd& locations) {
  if (locations.rows() == 0) throw DomainError("measurement set is empty");
  if (locations.cols() < 1) throw DomainError("locations need at least one coordinate");
  if (!locations.allFinite()) throw DomainError("location coordinates must be finite");
  const Eigen::Index n = locations.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if ((locations.row(i) - locations.row(j)).squaredNorm() == 0.0) {
        throw DuplicateLocationError(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
}

MeasurementSet::MeasurementSet(Eigen::MatrixXd locations, Eigen::VectorXd values)
    : MeasurementSet(std::move(locations), std::move(values), false) {
  validate_locations(locations_);
}

MeasurementSet::MeasurementSet(Eigen::MatrixXd locations, Eigen::VectorXd values, bool)
    : locations_(std::move(locations)), values_(std::move(values)) {
  if (locations_.rows() != values_.size()) {
    throw DomainError("measurement set has " + std::to_string(locations_.rows()) +
                      " locations but " + std::to_string(values_.size()) + " values");
  }
  if (!values_.allFinite()) throw DomainError("measurement values must be finite");
}

MeasurementSet MeasurementSet::with_values(Eigen::VectorXd values) const {
  return MeasurementSet(locations_, std::move(values), true);
}

double gaussian_density_sq(double r2, double variance, int dim) {
  if (!(variance > 0.0)) throw DomainError("Gaussian variance must be positive");
  if (dim < 1) throw DomainError("Gaussian dimension must be >= 1");
  return std::pow(2.0 * std::numbers::pi * variance, -0.5 * dim) *
         std::exp(-r2 / (2.0 * variance));
}

double gaussian_density(double r, double variance, int dim) {
  return gaussian_density_sq(r * r, variance, dim);
}

RbfBasis::RbfBasis(double variance, int dim) : variance_(variance), dim_(dim) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw DomainError("RBF variance must be finite and positive");
  }
  if (dim < 1) throw DomainError("RBF dimension must be >= 1");
}

double RbfBasis::sd() const noexcept { return std::sqrt(variance_); }

Eigen::MatrixXd build_matrix(const Eigen::MatrixXd& locations, const RbfBasis& basis) {
  if (locations.cols() != basis.dim()) throw DomainError("basis and location dimensions differ");
  const Eigen::Index n = locations.rows();
  const double peak = basis.eval_sq(0.0);
  const double two_var = 2.0 * basis.variance();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b(i, i) = peak;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v =
          peak * std::exp(-(locations.row(i) - locations.row(j)).squaredNorm() / two_var);
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return b;
}

CholeskySolver::CholeskySolver(Eigen::MatrixXd matrix, SolverOptions options)
    : matrix_(std::move(matrix)), options_(options) {
  if (matrix_.rows() != matrix_.cols()) throw DomainError("RBF matrix must be square");
  llt_.compute(matrix_);
  if (llt_.info() != Eigen::Success) {
    jitter_ = 1e-12 * matrix_(0, 0);
    Eigen::MatrixXd shifted = matrix_;
    shifted.diagonal().array() += jitter_;
    llt_.compute(shifted);
    if (llt_.info() != Eigen::Success) {
      throw ConditioningError(
          "Cholesky factorization of the RBF matrix failed even with diagonal jitter " +
          std::to_string(jitter_) +
          "; reduce the RBF standard deviation or thin the points (min_sep)");
    }
  }
}

Eigen::MatrixXd CholeskySolver::solve_unchecked(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd x = llt_.solve(rhs);
  for (int step = 0; step < options_.refinement_steps; ++step) {
    const Eigen::MatrixXd r = rhs - matrix_ * x;
    x += llt_.solve(r);
  }
  return x;
}

Eigen::MatrixXd CholeskySolver::solve(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != matrix_.rows()) throw DomainError("right-hand side has wrong length");
  Eigen::MatrixXd x = solve_unchecked(rhs);
  const Eigen::MatrixXd r = matrix_ * x - rhs;
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
    const double scale = rhs.col(c).cwiseAbs().maxCoeff();
    const double res = r.col(c).cwiseAbs().maxCoeff();
    if (!std::isfinite(res) || res > options_.residual_tolerance * scale) {
      const double rel = scale > 0.0 ? res / scale : res;
      throw ConditioningError("RBF system is ill-conditioned: relative residual " +
                              std::to_string(rel) + " exceeds " +
                              std::to_string(options_.residual_tolerance) +
                              "; reduce the RBF standard deviation or thin the points (min_sep)");
    }
  }
  return x;
}

Interpolant solve_weights(const MeasurementSet& ms, const RbfBasis& basis,
                          const SolverOptions& options) {
  CholeskySolver solver(build_matrix(ms.locations(), basis), options);
  Eigen::VectorXd weights = solver.solve(ms.values());
  return Interpolant{basis, ms.locations(), std::move(weights)};
}

double eval_interpolant(const Interpolant& itp, std::span<const double> x) {
  const auto d = static_cast<std::size_t>(itp.centers.cols());
  if (x.size() != d) {
    throw DomainError("evaluation point has dimension " + std::to_string(x.size()) +
                      ", interpolant has " + std::to_string(d));
  }
  const Eigen::Index n = itp.centers.rows();
  std::vector<double> parts(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    double r2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = x[c] - itp.centers(j, static_cast<Eigen::Index>(c));
      r2 += diff * diff;
    }
    parts[static_cast<std::size_t>(j)] = itp.weights(j) * itp.basis.eval_sq(r2);
  }
  return pairwise_sum(parts);
}

double eval_interpolant(const Interpolant& itp, const Eigen::VectorXd& x) {
  return eval_interpolant(itp, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

std::vector<std::size_t> thin_indices(const Eigen::MatrixXd& locations, double min_sep) {
  if (!(min_sep >= 0.0)) throw DomainError("min_sep must be non-negative");
  std::vector<std::size_t> kept;
  const double sep2 = min_sep * min_sep;
  for (Eigen::Index i = 0; i < locations.rows(); ++i) {
    const bool ok = std::none_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return (locations.row(i) - locations.row(static_cast<Eigen::Index>(k))).squaredNorm() <
             sep2;
    });
    if (ok) kept.push_back(static_cast<std::size_t>(i));
  }
  return kept;
}

MeasurementSet thin_points(const MeasurementSet& ms, double min_sep) {
  const auto kept = thin_indices(ms.locations(), min_sep);
  if (kept.size() == ms.size()) return ms;
  Eigen::MatrixXd loc(static_cast<Eigen::Index>(kept.size()), ms.locations().cols());
  Eigen::VectorXd val(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto src = static_cast<Eigen::Index>(kept[r]);
    loc.row(static_cast<Eigen::Index>(r)) = ms.locations().row(src);
    val(static_cast<Eigen::Index>(r)) = ms.values()(src);
  }
  return MeasurementSet(std::move(loc), std::move(val));
}

Detrended detrend_linear(const MeasurementSet& ms) {
  const Eigen::Index n = ms.locations().rows();
  const Eigen::Index d = ms.locations().cols();
  if (n < d + 1) {
    throw RankDeficientError("linear detrend needs at least d + 1 = " + std::to_string(d + 1) +
                             " points, got " + std::to_string(n));
  }
  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = ms.locations();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < d + 1) {
    throw RankDeficientError("locations are affinely degenerate; linear trend is not unique");
  }
  Eigen::VectorXd trend = qr.solve(ms.values());
  Eigen::VectorXd residual = ms.values() - design * trend;
  return Detrended{ms.with_values(std::move(residual)), std::move(trend)};
}

Eigen::VectorXd eval_trend(const Eigen::VectorXd& trend, const Eigen::MatrixXd& locations) {
  if (trend.size() != locations.cols() + 1) throw DomainError("trend has wrong length");
  Eigen::VectorXd out = locations * trend.tail(locations.cols());
  out.array() += trend(0);
  return out;
}

Eigen::VectorXd nearest_neighbor_distances(const Eigen::MatrixXd& locations) {
  const Eigen::Index n = locations.rows();
  if (n < 2) throw DomainError("nearest-neighbour distance needs at least two points");
  Eigen::VectorXd best = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r2 = (locations.row(i) - locations.row(j)).squaredNorm();
      best(i) = std::min(best(i), r2);
      best(j) = std::min(best(j), r2);
    }
  }
  return best.cwiseSqrt();
}

double mean_nearest_neighbor_distance(const Eigen::MatrixXd& locations) {
  return nearest_neighbor_distances(locations).mean();
}

}  // namespace scatterblur
