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

#ifndef SCATTERBLUR_CSV_IO_HPP
#define SCATTERBLUR_CSV_IO_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scatterblur/assimilation.hpp"
#include "scatterblur/kernel_approx.hpp"
#include "scatterblur/rbf_interp.hpp"
#include "scatterblur/spectral_diag.hpp"

namespace scatterblur::io {

/// Shortest-round-trip is not enough for diffable output; every value is
/// written with 17 significant digits.
std::string format_double(double value);

/// Parses a full field as a double. Returns nullopt on malformed text.
std::optional<double> parse_double(std::string_view text);

/// Numeric CSV: '#' comment lines, one header line, then rows of numbers.
struct Table {
  std::vector<std::string> comments;  ///< without the leading '#'
  std::vector<std::string> columns;
  Eigen::MatrixXd data;
  std::vector<std::size_t> line_numbers;  ///< 1-based file line of each data row
};

/// Throws ParseError (with line and column) on ragged or non-finite rows and
/// EmptyInput-style ParseError when there is no header or no data.
Table parse_table(std::istream& in);
Table read_table(const std::filesystem::path& path);
void write_table(std::ostream& out, const Table& table);
void write_table(const std::filesystem::path& path, const Table& table);

/// Point cloud: coordinate columns, then "value", then an optional "sd".
struct PointFile {
  std::vector<std::string> coordinate_columns;
  Eigen::MatrixXd locations;
  Eigen::VectorXd values;
  std::optional<Eigen::VectorXd> sd;
  std::vector<std::size_t> line_numbers;

  /// Validated measurement set. Duplicate locations raise ParseError naming
  /// both file lines.
  MeasurementSet measurements() const;
};

PointFile parse_points(std::istream& in);
PointFile read_points(const std::filesystem::path& path);

constexpr double kEarthRadiusKm = 6371.0;

/// Equirectangular projection of (lon, lat) degrees to km about a centre:
/// x = R cos(lat0) dlon, y = R dlat. Throws DomainError for |lat| >= 90.
Eigen::MatrixXd project_degrees(const Eigen::MatrixXd& lonlat, double center_lon,
                                double center_lat);
MeasurementSet project_degrees(const MeasurementSet& ms, double center_lon, double center_lat);

/// Two-column (c, rho) CSV with a comment carrying the construction
/// parameters.
void write_mixture_csv(std::ostream& out, const GreenMixture& mixture);
GreenMixture read_mixture_csv(std::istream& in);

/// k_index, k_phys, eigenvalue, reference for k = 0..N/2.
void write_spectrum_csv(std::ostream& out, const CirculantSpectrum& spectrum,
                        const std::string& comment);

/// Observations file (coordinates, value = y, sd) and a members file with
/// one column per member, rows aligned with the observations.
struct EnsembleFiles {
  PointFile observations;
  Ensemble ensemble;
};

EnsembleFiles read_ensemble(const std::filesystem::path& observations,
                            const std::filesystem::path& members);

}  // namespace scatterblur::io

#endif  // SCATTERBLUR_CSV_IO_HPP
