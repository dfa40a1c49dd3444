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

// Shared test configurations.

#ifndef SCATTERBLUR_TESTS_FIXTURES_HPP
#define SCATTERBLUR_TESTS_FIXTURES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "scatterblur/blur_op.hpp"
#include "scatterblur/spectral_diag.hpp"

namespace fixture {

/// 100 unit-spaced points on a circle, RBF sd 2.5, ell = 1, beta = 1 and the
/// default quadrature.
inline scatterblur::BlurConfig circle_config(bool normalize = false) {
  scatterblur::BlurConfig c;
  c.helmholtz = {1.0, 1.0};
  c.rbf_sd = 2.5;
  c.normalize = normalize;
  return c;
}

inline Eigen::MatrixXd circle_points() { return scatterblur::circle_locations(100, 1.0); }

/// Well-conditioned random instance: separated points, RBF sd at half the
/// mean nearest-neighbour distance.
struct Instance {
  Eigen::MatrixXd points;
  scatterblur::BlurConfig config;
  Eigen::VectorXd z;
};

inline Instance random_instance(std::mt19937_64& rng, std::size_t n, int dim) {
  Instance inst;
  const double extent = std::pow(static_cast<double>(n), 1.0 / dim);
  inst.points = oracle::separated_points(n, dim, extent, 0.5, rng);
  const double nn = oracle::mean_nn(inst.points);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ells[] = {0.5, 1.0, 2.0};
  const double betas[] = {0.5, 1.0, 2.0};
  inst.config.helmholtz = {ells[static_cast<int>(3 * u(rng)) % 3] * nn,
                           betas[static_cast<int>(3 * u(rng)) % 3]};
  inst.config.rbf_sd = 0.5 * nn;
  std::normal_distribution<double> nd;
  inst.z.resize(inst.points.rows());
  for (Eigen::Index i = 0; i < inst.z.size(); ++i) inst.z(i) = nd(rng);
  return inst;
}

/// One long and one short plane wave sampled at scattered points in
/// [0, 20]^2 with a blur length between the two scales.
struct TwoScale {
  Eigen::MatrixXd points;
  Eigen::VectorXd long_mode;
  Eigen::VectorXd short_mode;
  scatterblur::BlurConfig config;
};

inline TwoScale two_scale_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TwoScale t;
  t.points = oracle::separated_points(300, 2, 20.0, 0.7, rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  auto wave = [&](double wavelength) {
    const double th = angle(rng);
    const double ph = angle(rng);
    const double k = 2.0 * std::numbers::pi / wavelength;
    Eigen::VectorXd v(t.points.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = std::cos(k * (std::cos(th) * t.points(i, 0) + std::sin(th) * t.points(i, 1)) + ph);
    }
    return v;
  };
  t.long_mode = wave(40.0);
  t.short_mode = wave(3.0);
  const double nn = oracle::mean_nn(t.points);
  t.config.helmholtz = {1.0, 2.0};
  t.config.rbf_sd = 0.7 * nn;
  t.config.normalize = true;
  return t;
}

}  // namespace fixture

#endif  // SCATTERBLUR_TESTS_FIXTURES_HPP
