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

#ifndef SCATTERBLUR_SPECTRAL_DIAG_HPP
#define SCATTERBLUR_SPECTRAL_DIAG_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "scatterblur/blur_op.hpp"

namespace scatterblur {

/// n points on a circle about the origin with chord distance `spacing`
/// between neighbours; radius spacing / (2 sin(pi/n)).
Eigen::MatrixXd circle_locations(std::size_t n, double spacing);

/// Eigenvalues of S on a rotationally symmetric geometry, indexed by the
/// discrete wavenumber k = 0..N-1, with the Fourier comparison trace
/// (1 + ell^2 k_phys^2)^{-beta}, k_phys = 2 pi min(k, N-k) / (N spacing).
struct CirculantSpectrum {
  std::vector<double> eigenvalues;
  std::vector<double> wavenumbers;
  std::vector<double> reference;
  Eigen::MatrixXd geometry;
  double spacing = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  /// k = 0..N/2; the remaining indices duplicate these.
  std::size_t unique_count() const noexcept { return eigenvalues.size() / 2 + 1; }
};

/// True when every row of `m` is the previous row rotated right by one, to
/// `rel_tol` relative to the largest entry.
bool is_circulant(const Eigen::MatrixXd& m, double rel_tol);

/// Real parts of the DFT of a matrix's first row, lambda_k = sum_j m_0j
/// e^{-2 pi i jk/N}. `max_imag` receives the largest imaginary residue.
std::vector<double> first_row_dft(const Eigen::MatrixXd& m, double* max_imag = nullptr);

/// Circulant spectrum of S. Because B and B~ are both circulant on such a
/// geometry, lambda_k(S) = DFT_k(B~ row) / DFT_k(B row) / norm_factor, which is
/// the DFT of S's first row without forming B^{-1}.
/// Throws NotCirculantError if B or B~ is not circulant to `tolerance`, or if
/// the imaginary DFT residue exceeds tolerance * max|lambda|.
CirculantSpectrum circulant_eigenvalues(const BlurOperator& op, double tolerance = 1e-8);

/// cos(2 pi j k / N), j = 0..N-1: the real (cosine-phase) Fourier eigenvector.
Eigen::VectorXd fourier_eigenvector(std::size_t n, std::size_t k);

/// Interpolant of the k-th cosine eigenvector evaluated at each row of
/// `grid`. The RBF weights come from the circulant diagonalisation of B,
/// b = v_k / lambda_k(B).
Eigen::VectorXd eigenfunction_samples(const BlurOperator& op, std::size_t k,
                                      const Eigen::MatrixXd& grid, double tolerance = 1e-8);

}  // namespace scatterblur

#endif  // SCATTERBLUR_SPECTRAL_DIAG_HPP
