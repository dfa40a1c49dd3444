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

#ifndef SCATTERBLUR_SYNTHETIC_HPP
#define SCATTERBLUR_SYNTHETIC_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "scatterblur/kernel_approx.hpp"

namespace scatterblur::synthetic {

using Rng = std::mt19937_64;

/// Uniform points in [0, extent]^dim, rejecting candidates closer than
/// `min_sep` to an accepted point. Throws DomainError if the box is too
/// crowded to place `n` points.
Eigen::MatrixXd random_points(std::size_t n, int dim, double extent, double min_sep, Rng& rng);

struct PlaneWave {
  Eigen::VectorXd wavevector;  ///< angular wavevector, |k| = 2 pi / wavelength
  double amplitude = 1.0;
  double phase = 0.0;
};

/// sum_w amplitude * cos(k . x + phase) at each row of `locations`.
Eigen::VectorXd eval_waves(const std::vector<PlaneWave>& waves, const Eigen::MatrixXd& locations);

/// `count` waves with isotropic random directions, wavelengths log-uniform
/// in [min_wavelength, max_wavelength], uniform phases and amplitudes drawn
/// from N(0, amplitude^2 / count) so that the field variance is ~amplitude^2 / 2.
std::vector<PlaneWave> random_waves(std::size_t count, int dim, double min_wavelength,
                                    double max_wavelength, double amplitude, Rng& rng);

/// Seeded particle-filter experiment: scattered observation sites, a
/// random-wave truth, white observation noise and an ensemble whose
/// perturbations are a weak large-scale field plus strong small-scale noise.
/// Lengths (ell, rbf_sd, wavelengths) are multiples of the mean
/// nearest-neighbour distance of each trial's sites.
struct EssExperimentConfig {
  std::size_t n_points = 90;
  std::size_t n_members = 80;
  std::size_t trials = 50;
  int dim = 2;
  std::vector<double> ell_multiples{0.0, 1.0, 2.0, 4.0};
  double beta = 1.0;
  QuadratureParams quadrature{};
  double rbf_sd_multiple = 0.7;
  double obs_sd = 1.0;
  double large_amplitude = 0.5;   ///< rms of member large-scale perturbations
  double small_amplitude = 1.0;   ///< sd of member small-scale (white) perturbations
  double large_wavelength_min = 8.0;
  double large_wavelength_max = 30.0;
  std::uint64_t seed = 0;
};

struct EssRecord {
  double ell = 0.0;           ///< absolute length used
  double ell_multiple = 0.0;  ///< requested multiple of the NN distance
  std::size_t trial = 0;
  double ess = 0.0;
};

std::vector<EssRecord> run_ess_experiment(const EssExperimentConfig& config);

/// Median ESS for each entry of config.ell_multiples, in that order.
std::vector<double> median_ess(const std::vector<EssRecord>& records,
                               const std::vector<double>& ell_multiples);

}  // namespace scatterblur::synthetic

#endif  // SCATTERBLUR_SYNTHETIC_HPP
