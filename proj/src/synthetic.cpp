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

#include "scatterblur/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scatterblur/assimilation.hpp"
#include "scatterblur/blur_op.hpp"
#include "scatterblur/errors.hpp"
#include "scatterblur/rbf_interp.hpp"

namespace scatterblur::synthetic {

Eigen::MatrixXd random_points(std::size_t n, int dim, double extent, double min_sep, Rng& rng) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  if (!(extent > 0.0) || !(min_sep >= 0.0)) throw DomainError("invalid box for random_points");
  std::uniform_real_distribution<double> coord(0.0, extent);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), dim);
  const double sep2 = min_sep * min_sep;
  const std::size_t max_attempts = 1000 * n + 1000;
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; accepted < n; ++attempt) {
    if (attempt >= max_attempts) {
      throw DomainError("could not place " + std::to_string(n) + " points with separation " +
                        std::to_string(min_sep) + " in the box");
    }
    Eigen::RowVectorXd cand(dim);
    for (int c = 0; c < dim; ++c) cand(c) = coord(rng);
    bool ok = true;
    for (std::size_t i = 0; i < accepted && ok; ++i) {
      ok = (pts.row(static_cast<Eigen::Index>(i)) - cand).squaredNorm() >= sep2;
    }
    if (ok) pts.row(static_cast<Eigen::Index>(accepted++)) = cand;
  }
  return pts;
}

Eigen::VectorXd eval_waves(const std::vector<PlaneWave>& waves, const Eigen::MatrixXd& locations) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(locations.rows());
  for (const auto& w : waves) {
    if (w.wavevector.size() != locations.cols()) throw DomainError("wavevector dimension mismatch");
    out += (w.amplitude * ((locations * w.wavevector).array() + w.phase).cos()).matrix();
  }
  return out;
}

namespace {

Eigen::VectorXd random_direction(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  do {
    for (int c = 0; c < dim; ++c) v(c) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

std::vector<PlaneWave> random_waves(std::size_t count, int dim, double min_wavelength,
                                    double max_wavelength, double amplitude, Rng& rng) {
  if (!(min_wavelength > 0.0) || !(max_wavelength >= min_wavelength)) {
    throw DomainError("invalid wavelength range");
  }
  std::uniform_real_distribution<double> log_len(std::log(min_wavelength),
                                                 std::log(max_wavelength));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> amp(0.0, amplitude / std::sqrt(static_cast<double>(count)));
  std::vector<PlaneWave> waves;
  waves.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double wavelength = std::exp(log_len(rng));
    PlaneWave w;
    w.wavevector = random_direction(dim, rng) * (2.0 * std::numbers::pi / wavelength);
    w.amplitude = amp(rng);
    w.phase = phase(rng);
    waves.push_back(std::move(w));
  }
  return waves;
}

std::vector<EssRecord> run_ess_experiment(const EssExperimentConfig& config) {
  if (config.n_points < 2 || config.n_members < 1 || config.trials < 1) {
    throw DomainError("ESS experiment needs >= 2 points, >= 1 member and >= 1 trial");
  }
  Rng rng(config.seed);
  std::normal_distribution<double> normal;
  const double extent = std::pow(static_cast<double>(config.n_points), 1.0 / config.dim);
  constexpr std::size_t kWaves = 12;

  std::vector<EssRecord> records;
  records.reserve(config.trials * config.ell_multiples.size());
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    const Eigen::MatrixXd sites =
        random_points(config.n_points, config.dim, extent, 0.4, rng);
    const double nn = mean_nearest_neighbor_distance(sites);
    const auto n = sites.rows();
    const auto ne = static_cast<Eigen::Index>(config.n_members);

    const Eigen::VectorXd truth = eval_waves(
        random_waves(kWaves, config.dim, config.large_wavelength_min * nn,
                     config.large_wavelength_max * nn, 1.0, rng),
        sites);
    Eigen::VectorXd obs(n);
    for (Eigen::Index i = 0; i < n; ++i) obs(i) = truth(i) + config.obs_sd * normal(rng);
    Eigen::MatrixXd members(n, ne);
    for (Eigen::Index m = 0; m < ne; ++m) {
      const Eigen::VectorXd large = eval_waves(
          random_waves(kWaves, config.dim, config.large_wavelength_min * nn,
                       config.large_wavelength_max * nn, config.large_amplitude, rng),
          sites);
      for (Eigen::Index i = 0; i < n; ++i) {
        members(i, m) = truth(i) + large(i) + config.small_amplitude * normal(rng);
      }
    }
    const Ensemble ens(members, obs, Eigen::VectorXd::Constant(n, config.obs_sd));

    for (double mult : config.ell_multiples) {
      BlurConfig bc;
      bc.helmholtz = {mult * nn, config.beta};
      bc.quadrature = config.quadrature;
      bc.rbf_sd = config.rbf_sd_multiple * nn;
      const BlurOperator op = BlurOperator::prepare(bc, sites);
      const WeightSet ws = sir_weights(ens, op);
      records.push_back({mult * nn, mult, trial, ws.ess});
    }
  }
  return records;
}

std::vector<double> median_ess(const std::vector<EssRecord>& records,
                               const std::vector<double>& ell_multiples) {
  std::vector<double> out;
  for (double mult : ell_multiples) {
    std::vector<double> v;
    for (const auto& r : records) {
      if (r.ell_multiple == mult) v.push_back(r.ess);
    }
    if (v.empty()) throw DomainError("no records for ell multiple " + std::to_string(mult));
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    out.push_back(v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]));
  }
  return out;
}

}  // namespace scatterblur::synthetic
