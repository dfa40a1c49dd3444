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

#ifndef SCATTERBLUR_KERNEL_APPROX_HPP
#define SCATTERBLUR_KERNEL_APPROX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace scatterblur {

/// Parameters of D = (1 - ell^2 Laplacian)^beta.
struct HelmholtzParams {
  double ell = 1.0;   ///< length scale, same units as the location coordinates
  double beta = 1.0;  ///< dimensionless exponent

  /// Throws DomainError unless ell > 0 and beta > 0.
  void validate() const;
};

/// Trapezoid-rule discretization of the exponential-sum integral.
struct QuadratureParams {
  double h = 0.2;
  int m_minus = 32;  ///< number of negative-index terms
  int m_plus = 28;   ///< number of positive-index terms

  void validate() const;
  std::size_t term_count() const noexcept {
    return static_cast<std::size_t>(m_minus) + static_cast<std::size_t>(m_plus) + 1;
  }
};

/// One normalized isotropic Gaussian c * phi(x; 0, rho I) of the mixture.
struct GaussianTerm {
  int index = 0;         ///< quadrature index n
  double weight = 0.0;   ///< c_n
  double variance = 0.0; ///< rho_n
};

/// Multiresolution Gaussian approximation of the Green's function of
/// (1 - ell^2 Laplacian)^beta in `dim` dimensions. Immutable.
///
/// Terms are ordered by strictly increasing variance and all weights are
/// positive. Quadrature nodes whose weight underflows to zero in double
/// precision contribute nothing and are omitted; `dropped_terms()` counts them.
class GreenMixture {
 public:
  /// Validates the term invariants and throws DomainError on violation.
  GreenMixture(HelmholtzParams helmholtz, QuadratureParams quadrature, int dim,
               std::vector<GaussianTerm> terms, std::size_t dropped_terms = 0);

  const HelmholtzParams& helmholtz() const noexcept { return helmholtz_; }
  const QuadratureParams& quadrature() const noexcept { return quadrature_; }
  int dim() const noexcept { return dim_; }
  std::span<const GaussianTerm> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t dropped_terms() const noexcept { return dropped_; }

  /// Physical-space value g(r) = sum_n c_n phi(r; 0, rho_n I).
  double operator()(double r) const;

 private:
  HelmholtzParams helmholtz_;
  QuadratureParams quadrature_;
  int dim_;
  std::vector<GaussianTerm> terms_;
  std::size_t dropped_;
};

/// Builds the Gaussian approximation of the fractional bound-state Helmholtz
/// Green's function:
///
///   a_n   = exp(nh - e^{-nh})
///   v_n   = h (1 + e^{-nh}) exp(beta (nh - e^{-nh}))
///   rho_n = 2 ell^2 a_n
///   c_n   = v_n e^{-a_n} (pi / (ell^2 a_n))^{d/2 - 1} / Gamma(beta)
///
/// for n = -m_minus .. m_plus. Everything is evaluated in the log domain.
/// Throws DomainError for invalid parameters or when a term overflows; the
/// message names the offending n.
GreenMixture gaussian_bsh(const HelmholtzParams& helmholtz, const QuadratureParams& quadrature,
                          int dim);

/// Fourier-space value of the mixture at wavenumber k >= 0, i.e. the
/// exponential sum (1/Gamma(beta)) sum_n v_n exp(-a_n (1 + ell^2 k^2)),
/// which approximates (1 + ell^2 k^2)^{-beta}.
double eval_fourier(const GreenMixture& mixture, double k);

/// Exact target spectrum (1 + ell^2 k^2)^{-beta}.
double helmholtz_spectrum(const HelmholtzParams& helmholtz, double k);

struct ErrorSample {
  double k = 0.0;
  double approx = 0.0;
  double exact = 0.0;
  double rel_err = 0.0;  ///< |approx - exact| / exact
};

/// Relative error of eval_fourier against the exact spectrum on a uniform
/// grid of `n_samples` wavenumbers over [0, k_max].
std::vector<ErrorSample> relative_error_profile(const GreenMixture& mixture, double k_max,
                                                std::size_t n_samples);

double max_relative_error(std::span<const ErrorSample> profile) noexcept;

/// Gamma(beta) for beta > 0.
double gamma_function(double beta);

}  // namespace scatterblur

#endif  // SCATTERBLUR_KERNEL_APPROX_HPP
