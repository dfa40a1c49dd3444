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

#include "scatterblur/spectral_diag.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "scatterblur/errors.hpp"
#include "scatterblur/summation.hpp"

namespace scatterblur {

namespace {

struct TrigTable {
  std::vector<double> cos;
  std::vector<double> sin;
};

// Exactly symmetric tables so that the DFT at k and N-k agree bitwise.
TrigTable make_table(std::size_t n) {
  TrigTable t{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t m = 0; m <= n / 2; ++m) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    t.cos[m] = std::cos(angle);
    t.sin[m] = std::sin(angle);
    if (m != 0 && m != n - m) {
      t.cos[n - m] = t.cos[m];
      t.sin[n - m] = -t.sin[m];
    }
  }
  if (n % 2 == 0) t.sin[n / 2] = 0.0;
  t.sin[0] = 0.0;
  return t;
}

struct Dft {
  std::vector<double> re;
  double max_imag = 0.0;
  double max_abs = 0.0;
};

Dft row_dft(const Eigen::MatrixXd& m, const TrigTable& table) {
  const auto n = static_cast<std::size_t>(m.cols());
  Dft out{std::vector<double>(n)};
  std::vector<double> re_parts(n);
  std::vector<double> im_parts(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = (j * k) % n;
      const double x = m(0, static_cast<Eigen::Index>(j));
      re_parts[j] = x * table.cos[idx];
      im_parts[j] = -x * table.sin[idx];
    }
    out.re[k] = pairwise_sum(re_parts);
    const double im = pairwise_sum(im_parts);
    out.max_imag = std::max(out.max_imag, std::abs(im));
    out.max_abs = std::max(out.max_abs, std::hypot(out.re[k], im));
  }
  return out;
}

void require_circulant(const Eigen::MatrixXd& m, double tol, const char* name) {
  if (!is_circulant(m, tol)) {
    throw NotCirculantError(std::string(name) +
                            " is not circulant; the geometry is not rotationally symmetric "
                            "or the points are not ordered around the circle");
  }
}

double neighbour_spacing(const Eigen::MatrixXd& geometry) {
  return (geometry.row(1) - geometry.row(0)).norm();
}

}  // namespace

Eigen::MatrixXd circle_locations(std::size_t n, double spacing) {
  if (n < 3) throw DomainError("circle_locations needs n >= 3");
  if (!(spacing > 0.0)) throw DomainError("circle spacing must be positive");
  const double radius = spacing / (2.0 * std::sin(std::numbers::pi / static_cast<double>(n)));
  Eigen::MatrixXd q(static_cast<Eigen::Index>(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    q(static_cast<Eigen::Index>(i), 0) = radius * std::cos(angle);
    q(static_cast<Eigen::Index>(i), 1) = radius * std::sin(angle);
  }
  return q;
}

bool is_circulant(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  const Eigen::Index n = m.rows();
  const double scale = m.cwiseAbs().maxCoeff();
  const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(m((i + 1) % n, (j + 1) % n) - m(i, j)) > tol) return false;
    }
  }
  return true;
}

std::vector<double> first_row_dft(const Eigen::MatrixXd& m, double* max_imag) {
  const Dft d = row_dft(m, make_table(static_cast<std::size_t>(m.cols())));
  if (max_imag != nullptr) *max_imag = d.max_imag;
  return d.re;
}

CirculantSpectrum circulant_eigenvalues(const BlurOperator& op, double tolerance) {
  const std::size_t n = op.size();
  if (n < 3) throw DomainError("circulant diagnostic needs at least 3 points");

  CirculantSpectrum out;
  out.geometry = op.locations();
  out.spacing = neighbour_spacing(out.geometry);
  const TrigTable table = make_table(n);

  if (op.is_identity()) {
    require_circulant(build_matrix(op.locations(), op.basis()), tolerance, "B");
    out.eigenvalues.assign(n, 1.0);
  } else {
    const Eigen::MatrixXd& b = op.rbf_matrix();
    const Eigen::MatrixXd bt = op.blurred_matrix();
    require_circulant(b, tolerance, "B");
    require_circulant(bt, tolerance, "B~");
    const Dft db = row_dft(b, table);
    const Dft dbt = row_dft(bt, table);
    if (db.max_imag > tolerance * db.max_abs || dbt.max_imag > tolerance * dbt.max_abs) {
      throw NotCirculantError("circulant spectrum has a non-negligible imaginary part");
    }
    out.eigenvalues.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(db.re[k] > 0.0)) {
        throw ConditioningError("eigenvalue " + std::to_string(k) +
                                " of B is not resolvable in double precision; reduce rbf_sd");
      }
      out.eigenvalues[k] = dbt.re[k] / db.re[k] / op.norm_factor();
    }
  }

  const double ell = op.config().helmholtz.ell;
  const HelmholtzParams hp{ell, op.config().helmholtz.beta};
  out.wavenumbers.resize(n);
  out.reference.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double folded = static_cast<double>(std::min(k, n - k));
    const double kp = 2.0 * std::numbers::pi * folded / (static_cast<double>(n) * out.spacing);
    out.wavenumbers[k] = kp;
    out.reference[k] = helmholtz_spectrum(hp, kp);
  }
  return out;
}

Eigen::VectorXd fourier_eigenvector(std::size_t n, std::size_t k) {
  if (k >= n) throw DomainError("wavenumber index out of range");
  const TrigTable table = make_table(n);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = table.cos[(j * k) % n];
  return v;
}

Eigen::VectorXd eigenfunction_samples(const BlurOperator& op, std::size_t k,
                                      const Eigen::MatrixXd& grid, double tolerance) {
  const std::size_t n = op.size();
  if (k >= n) throw DomainError("wavenumber index out of range");
  if (grid.cols() != op.locations().cols()) throw DomainError("grid dimension mismatch");
  const Eigen::MatrixXd b =
      op.is_identity() ? build_matrix(op.locations(), op.basis()) : op.rbf_matrix();
  require_circulant(b, tolerance, "B");
  const Dft db = row_dft(b, make_table(n));
  if (!(db.re[k] > 0.0)) {
    throw ConditioningError("eigenvalue " + std::to_string(k) +
                            " of B is not resolvable in double precision; reduce rbf_sd");
  }
  const Interpolant itp{op.basis(), op.locations(), fourier_eigenvector(n, k) / db.re[k]};
  Eigen::VectorXd out(grid.rows());
  for (Eigen::Index g = 0; g < grid.rows(); ++g) {
    out(g) = eval_interpolant(itp, Eigen::VectorXd(grid.row(g).transpose()));
  }
  return out;
}

}  // namespace scatterblur
