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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "scatterblur/errors.hpp"
#include "scatterblur/kernel_approx.hpp"

namespace sb = scatterblur;

namespace {

// The quadrature step as the library sees it (0.2 rounded to double).
const long double kH = 0.2;

double rel(long double a, long double b) {
  return static_cast<double>(std::fabs(a - b) / std::fabs(b));
}

TEST(GaussianBsh, CentralNodeMatchesHandValues) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {0.2, 32, 28}, 2);
  const auto& t = mix.terms()[32];
  ASSERT_EQ(t.index, 0);
  EXPECT_NEAR(t.variance, 2.0 * std::exp(-1.0), 1e-15);
  // d = 2: c_0 = v_0 e^{-a_0} with a_0 = 1/e and v_0 = 0.4/e.
  const double a0 = 0.36787944117144233;
  EXPECT_NEAR(t.weight, 0.14715177646857694 * std::exp(-a0), 1e-15);
}

TEST(GaussianBsh, MatchesClosedFormAndTwoStepForm) {
  for (int dim : {1, 2, 3}) {
    for (double beta : {0.5, 1.0, 2.0, 8.0}) {
      for (double ell : {0.3, 1.0, 2.5}) {
        const auto mix = sb::gaussian_bsh({ell, beta}, {0.2, 32, 28}, dim);
        EXPECT_EQ(mix.size() + mix.dropped_terms(), 61u);
        for (const auto& t : mix.terms()) {
          const auto q = oracle::node(t.index, kH, ell, beta, dim);
          // Rounding of n*h is amplified by the double exponential; the
          // tolerance scales with that condition number.
          const double s = std::fabs(t.index * 0.2);
          const double cond = 1.0 + s * (1.0 + std::exp(s)) * (1.0 + beta);
          const double tol = 16.0 * std::numeric_limits<double>::epsilon() * cond;
          if (q.c >= std::numeric_limits<double>::min()) {
            EXPECT_LT(rel(t.weight, q.c), std::max(tol, 1e-13)) << "n=" << t.index;
          } else {  // subnormal: only absolute accuracy is meaningful
            EXPECT_LE(std::fabs(t.weight - q.c), tol * std::numeric_limits<double>::min());
          }
          EXPECT_LT(rel(t.variance, q.rho), std::max(tol, 1e-13)) << "n=" << t.index;
          const long double two_step = oracle::two_step_weight(t.index, kH, ell, beta, dim);
          EXPECT_LT(rel(q.c, two_step), 1e-12) << "n=" << t.index;
        }
      }
    }
  }
}

TEST(GaussianBsh, PositiveWeightsAndIncreasingVariances) {
  for (int dim : {1, 2, 3, 5}) {
    for (double beta : {0.5, 1.0, 3.0, 20.0}) {
      for (double h : {0.1, 0.2}) {
        const auto mix = sb::gaussian_bsh({0.7, beta}, {h, 32, 30}, dim);
        EXPECT_EQ(mix.size() + mix.dropped_terms(), 63u);
        double prev = 0.0;
        for (const auto& t : mix.terms()) {
          EXPECT_GT(t.weight, 0.0);
          EXPECT_GT(t.variance, prev);
          prev = t.variance;
        }
      }
    }
  }
}

TEST(GaussianBsh, DefaultsAreTheCalibratedQuadrature) {
  const sb::QuadratureParams q;
  EXPECT_EQ(q.h, 0.2);
  EXPECT_EQ(q.m_minus, 32);
  EXPECT_EQ(q.m_plus, 28);
  EXPECT_EQ(q.term_count(), 61u);
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, q, 2);
  EXPECT_EQ(mix.terms().front().index, -32);
  EXPECT_EQ(mix.terms().back().index, 28);
}

TEST(GaussianBsh, RejectsInvalidParameters) {
  EXPECT_THROW(sb::gaussian_bsh({0.0, 1.0}, {}, 2), sb::DomainError);
  EXPECT_THROW(sb::gaussian_bsh({-1.0, 1.0}, {}, 2), sb::DomainError);
  EXPECT_THROW(sb::gaussian_bsh({1.0, 0.0}, {}, 2), sb::DomainError);
  EXPECT_THROW(sb::gaussian_bsh({1.0, 1.0}, {0.0, 1, 1}, 2), sb::DomainError);
  EXPECT_THROW(sb::gaussian_bsh({1.0, 1.0}, {0.2, -1, 1}, 2), sb::DomainError);
  EXPECT_THROW(sb::gaussian_bsh({1.0, 1.0}, {}, 0), sb::DomainError);
}

TEST(GaussianBsh, OverflowNamesTheIndex) {
  try {
    sb::gaussian_bsh({1.0, 1.0}, {1.0, 0, 800}, 2);
    FAIL() << "expected overflow";
  } catch (const sb::DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("n=710"), std::string::npos) << e.what();
  }
}

TEST(GaussianBsh, WeightOverflowIsRejected) {
  // In five dimensions with a small exponent the far negative tail has
  // weights beyond the double range.
  try {
    sb::gaussian_bsh({1.0, 0.25}, {0.2, 40, 28}, 5);
    FAIL() << "expected overflow";
  } catch (const sb::DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("overflows at n=-"), std::string::npos) << e.what();
  }
}

TEST(GaussianBsh, NegligibleUnderflowingTermsAreDropped) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {0.2, 40, 28}, 2);
  EXPECT_GT(mix.dropped_terms(), 0u);
  EXPECT_EQ(mix.size() + mix.dropped_terms(), 69u);
  const auto ref = sb::gaussian_bsh({1.0, 1.0}, {0.2, 32, 28}, 2);
  for (double k : {0.0, 1.0, 10.0, 49.0}) {
    EXPECT_LT(rel(sb::eval_fourier(mix, k), sb::eval_fourier(ref, k)), 1e-12);
  }
}

TEST(GaussianBsh, ScaleCovariance) {
  for (double ell : {0.5, 3.0, 17.0}) {
    const auto unit = sb::gaussian_bsh({1.0, 1.5}, {}, 2);
    const auto scaled = sb::gaussian_bsh({ell, 1.5}, {}, 2);
    ASSERT_EQ(unit.size(), scaled.size());
    for (std::size_t n = 0; n < unit.size(); ++n) {
      EXPECT_EQ(scaled.terms()[n].variance, unit.terms()[n].variance * (ell * ell));
    }
    for (double k : {0.0, 0.1, 1.0, 4.0, 20.0}) {
      EXPECT_LT(rel(sb::eval_fourier(scaled, k), sb::eval_fourier(unit, ell * k)), 1e-12);
    }
  }
}

TEST(EvalFourier, MatchesExponentialSum) {
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double ell : {1.0, 2.0}) {
      const auto mix = sb::gaussian_bsh({ell, beta}, {}, 2);
      for (double k : {0.0, 0.3, 1.0, 7.5, 30.0, 49.0}) {
        const long double want = oracle::exponential_sum(k, kH, 32, 28, ell, beta);
        EXPECT_LT(rel(sb::eval_fourier(mix, k), want), 1e-12) << "k=" << k;
      }
    }
  }
}

TEST(EvalFourier, IndependentOfDimension) {
  const auto m2 = sb::gaussian_bsh({1.0, 1.0}, {}, 2);
  for (int dim : {1, 3}) {
    const auto m = sb::gaussian_bsh({1.0, 1.0}, {}, dim);
    for (double k : {0.0, 2.0, 20.0}) {
      EXPECT_LT(rel(sb::eval_fourier(m, k), sb::eval_fourier(m2, k)), 1e-12);
    }
  }
}

TEST(EvalFourier, NearOneAtZero) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {}, 2);
  EXPECT_NEAR(sb::eval_fourier(mix, 0.0), 1.0, 2.5e-3);
}

TEST(EvalFourier, FiniteFarOutsideCalibratedRange) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {}, 2);
  const double v = sb::eval_fourier(mix, 200.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

TEST(RelativeErrorProfile, HalfOrderKernelWithinBound) {
  const auto mix = sb::gaussian_bsh({1.0, 0.5}, {}, 2);
  const auto prof = sb::relative_error_profile(mix, 49.0, 500);
  ASSERT_EQ(prof.size(), 500u);
  EXPECT_EQ(prof.front().k, 0.0);
  EXPECT_EQ(prof.back().k, 49.0);
  EXPECT_LT(sb::max_relative_error(prof), 5e-4);
}

TEST(RelativeErrorProfile, HalfOrderAgreesWithFineGridOracle) {
  // Brute-force comparison of t^{-beta} with the partial exponential sum over
  // t in [1, 1 + 49^2].
  const double beta = 0.5;
  const auto mix = sb::gaussian_bsh({1.0, beta}, {}, 2);
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const long double t = 1.0L + (49.0L * 49.0L) * i / 20000.0L;
    const long double k = std::sqrt(t - 1.0L);
    const long double approx = oracle::exponential_sum(k, kH, 32, 28, 1.0L, beta);
    const double err = rel(approx, std::pow(t, -beta));
    worst = std::max(worst, err);
    EXPECT_LT(rel(sb::eval_fourier(mix, static_cast<double>(k)), approx), 1e-12);
  }
  EXPECT_LT(worst, 5e-4);
  EXPECT_GT(worst, 0.0);
}

TEST(RelativeErrorProfile, UnitOrderKernelErrorIsStable) {
  // The first-order kernel with the default quadrature attains about 2.1e-3.
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {}, 2);
  const double e = sb::max_relative_error(sb::relative_error_profile(mix, 49.0, 500));
  EXPECT_LT(e, 2.2e-3);
  EXPECT_GT(e, 1.9e-3);
}

TEST(RelativeErrorProfile, SingleTermIsPoor) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {0.2, 0, 0}, 2);
  EXPECT_GT(sb::max_relative_error(sb::relative_error_profile(mix, 49.0, 500)), 0.1);
}

TEST(RelativeErrorProfile, SignedErrorOscillates) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {}, 2);
  const auto prof = sb::relative_error_profile(mix, 49.0, 500);
  int changes = 0;
  for (std::size_t i = 1; i < prof.size(); ++i) {
    const double a = prof[i - 1].approx - prof[i - 1].exact;
    const double b = prof[i].approx - prof[i].exact;
    if ((a < 0) != (b < 0)) ++changes;
  }
  EXPECT_GE(changes, 2);
}

TEST(RelativeErrorProfile, RefinementDoesNotIncreaseError) {
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto coarse = sb::gaussian_bsh({1.0, beta}, {0.2, 32, 28}, 2);
    const auto fine = sb::gaussian_bsh({1.0, beta}, {0.1, 64, 56}, 2);
    const double ec = sb::max_relative_error(sb::relative_error_profile(coarse, 49.0, 500));
    const double ef = sb::max_relative_error(sb::relative_error_profile(fine, 49.0, 500));
    EXPECT_LE(ef, 1.1 * ec) << "beta=" << beta;
  }
}

TEST(RelativeErrorProfile, RejectsBadArguments) {
  const auto mix = sb::gaussian_bsh({1.0, 1.0}, {}, 2);
  EXPECT_THROW(sb::relative_error_profile(mix, 0.0, 10), sb::DomainError);
  EXPECT_THROW(sb::relative_error_profile(mix, 1.0, 1), sb::DomainError);
}

TEST(GreenMixture, PhysicalValueIsSumOfDensities) {
  for (int dim : {1, 2, 3}) {
    const auto mix = sb::gaussian_bsh({1.3, 1.0}, {}, dim);
    oracle::Mixture om = oracle::mixture(kH, 32, 28, 1.3L, 1.0L, dim);
    for (double r : {0.05, 0.5, 1.0, 3.0, 8.0}) {
      long double want = 0.0L;
      for (std::size_t n = 0; n < om.c.size(); ++n) want += om.c[n] * oracle::density(r, om.rho[n], dim);
      EXPECT_LT(rel(mix(r), want), 1e-12) << "dim=" << dim << " r=" << r;
    }
  }
}

TEST(GreenMixture, ValidatesInvariants) {
  const sb::HelmholtzParams hp{1.0, 1.0};
  const sb::QuadratureParams qp{0.2, 0, 1};
  EXPECT_NO_THROW(sb::GreenMixture(hp, qp, 2, {{0, 1.0, 1.0}, {1, 1.0, 2.0}}));
  EXPECT_THROW(sb::GreenMixture(hp, qp, 2, {{0, -1.0, 1.0}, {1, 1.0, 2.0}}), sb::DomainError);
  EXPECT_THROW(sb::GreenMixture(hp, qp, 2, {{0, 1.0, 2.0}, {1, 1.0, 2.0}}), sb::DomainError);
  EXPECT_THROW(sb::GreenMixture(hp, qp, 2, {{0, 1.0, 1.0}}), sb::DomainError);
  EXPECT_NO_THROW(sb::GreenMixture(hp, qp, 2, {{1, 1.0, 2.0}}, 1));
}

TEST(GammaFunction, KnownValues) {
  EXPECT_NEAR(sb::gamma_function(0.5), std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_DOUBLE_EQ(sb::gamma_function(1.0), 1.0);
  EXPECT_DOUBLE_EQ(sb::gamma_function(5.0), 24.0);
  EXPECT_NEAR(sb::gamma_function(1.5) / (0.5 * std::sqrt(std::numbers::pi)), 1.0, 1e-14);
  EXPECT_THROW(sb::gamma_function(0.0), sb::DomainError);
}

}  // namespace
