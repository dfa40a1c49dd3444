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

#include "scatterblur/kernel_approx.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatterblur/errors.hpp"
#include "scatterblur/summation.hpp"

namespace scatterblur {

namespace {

const double kLogMax = std::log(std::numeric_limits<double>::max());
// Terms whose Fourier-space weight falls below exp(kLogNegligible) are dropped
// when their variance cannot be represented.
constexpr double kLogNegligible = -69.0;  // about 1e-30

double log_gamma(double beta) {
  const double g = std::tgamma(beta);
  if (std::isfinite(g)) return std::log(g);
  return std::lgamma(beta);
}

}  // namespace

void HelmholtzParams::validate() const {
  if (!(ell > 0.0) || !std::isfinite(ell)) {
    throw DomainError("ell must be a finite positive length, got " + std::to_string(ell));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be finite and positive, got " + std::to_string(beta));
  }
}

void QuadratureParams::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("quadrature step h must be positive, got " + std::to_string(h));
  }
  if (m_minus < 0 || m_plus < 0) {
    throw DomainError("quadrature term counts must be non-negative");
  }
}

double gamma_function(double beta) {
  if (!(beta > 0.0)) throw DomainError("gamma_function requires beta > 0");
  return std::tgamma(beta);
}

GreenMixture::GreenMixture(HelmholtzParams helmholtz, QuadratureParams quadrature, int dim,
                           std::vector<GaussianTerm> terms, std::size_t dropped_terms)
    : helmholtz_(helmholtz),
      quadrature_(quadrature),
      dim_(dim),
      terms_(std::move(terms)),
      dropped_(dropped_terms) {
  helmholtz_.validate();
  quadrature_.validate();
  if (dim_ < 1) throw DomainError("mixture dimension must be >= 1");
  if (terms_.empty()) throw DomainError("mixture has no terms");
  if (terms_.size() + dropped_ != quadrature_.term_count()) {
    throw DomainError("mixture term count does not match quadrature parameters");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
      throw DomainError("mixture weight at n=" + std::to_string(t.index) + " is not positive");
    }
    if (!(t.variance > 0.0) || !std::isfinite(t.variance)) {
      throw DomainError("mixture variance at n=" + std::to_string(t.index) +
                        " is not positive");
    }
    if (i > 0 && !(t.variance > terms_[i - 1].variance)) {
      throw DomainError("mixture variances are not strictly increasing at n=" +
                        std::to_string(t.index));
    }
  }
}

double GreenMixture::operator()(double r) const {
  const double half_d = 0.5 * dim_;
  std::vector<double> parts;
  parts.reserve(terms_.size());
  for (const auto& t : terms_) {
    parts.push_back(std::exp(std::log(t.weight) -
                             half_d * std::log(2.0 * std::numbers::pi * t.variance) -
                             r * r / (2.0 * t.variance)));
  }
  return pairwise_sum(parts);
}

GreenMixture gaussian_bsh(const HelmholtzParams& helmholtz, const QuadratureParams& quadrature,
                          int dim) {
  helmholtz.validate();
  quadrature.validate();
  if (dim < 1) throw DomainError("dimension must be >= 1");

  const double ell = helmholtz.ell;
  const double ell2 = ell * ell;
  const double beta = helmholtz.beta;
  const double h = quadrature.h;
  const double lg = log_gamma(beta);
  const double log_pi_over_ell2 = std::log(std::numbers::pi) - 2.0 * std::log(ell);
  const double shape = 0.5 * dim - 1.0;

  std::vector<GaussianTerm> terms;
  terms.reserve(quadrature.term_count());
  std::size_t dropped = 0;

  for (int n = -quadrature.m_minus; n <= quadrature.m_plus; ++n) {
    const double x = n * h;
    const double e = std::exp(-x);  // may be +inf for very negative x
    const double log_a = x - e;
    if (log_a > kLogMax) {
      throw DomainError("rate a_n overflows at n=" + std::to_string(n));
    }
    const double a = std::exp(log_a);
    const double log_v = std::log(h) + std::log1p(e) + beta * log_a;
    const double log_c = log_v - a + shape * (log_pi_over_ell2 - log_a) - lg;
    if (std::isnan(log_c) || log_c > kLogMax) {
      throw DomainError("weight c_n overflows at n=" + std::to_string(n));
    }
    const double c = std::exp(log_c);
    if (c == 0.0) {
      ++dropped;
      continue;
    }
    const double rho = (2.0 * a) * ell2;
    if (!std::isfinite(rho)) {
      throw DomainError("variance rho_n overflows at n=" + std::to_string(n));
    }
    if (rho == 0.0) {
      // The term's Fourier-space contribution is at most v_n / Gamma(beta);
      // a vanishing term is dropped, a significant one is an error.
      if (log_v - lg < kLogNegligible) {
        ++dropped;
        continue;
      }
      throw DomainError("variance rho_n underflows at n=" + std::to_string(n) +
                        "; reduce m_minus or increase h");
    }
    terms.push_back({n, c, rho});
  }
  if (terms.empty()) {
    throw DomainError("all mixture weights underflow; check beta and quadrature parameters");
  }
  return GreenMixture(helmholtz, quadrature, dim, std::move(terms), dropped);
}

double helmholtz_spectrum(const HelmholtzParams& helmholtz, double k) {
  const double t = 1.0 + helmholtz.ell * helmholtz.ell * k * k;
  return std::pow(t, -helmholtz.beta);
}

double eval_fourier(const GreenMixture& mixture, double k) {
  // c_n (rho_n / 2pi)^{d/2-1} = v_n e^{-a_n} / Gamma(beta) and rho_n k^2 / 2 = a_n ell^2 k^2
  const double shape = 0.5 * mixture.dim() - 1.0;
  const double k2 = k * k;
  std::vector<double> parts;
  parts.reserve(mixture.size());
  for (const auto& t : mixture.terms()) {
    parts.push_back(std::exp(std::log(t.weight) +
                             shape * std::log(t.variance / (2.0 * std::numbers::pi)) -
                             0.5 * t.variance * k2));
  }
  return pairwise_sum(parts);
}

std::vector<ErrorSample> relative_error_profile(const GreenMixture& mixture, double k_max,
                                                std::size_t n_samples) {
  if (!(k_max > 0.0)) throw DomainError("k_max must be positive");
  if (n_samples < 2) throw DomainError("relative_error_profile needs at least 2 samples");
  std::vector<ErrorSample> out;
  out.reserve(n_samples);
  const double step = k_max / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double k = (i + 1 == n_samples) ? k_max : step * static_cast<double>(i);
    const double approx = eval_fourier(mixture, k);
    const double exact = helmholtz_spectrum(mixture.helmholtz(), k);
    out.push_back({k, approx, exact, std::abs(approx - exact) / exact});
  }
  return out;
}

double max_relative_error(std::span<const ErrorSample> profile) noexcept {
  double m = 0.0;
  for (const auto& s : profile) m = std::max(m, s.rel_err);
  return m;
}

}  // namespace scatterblur
