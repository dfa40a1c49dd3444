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

#include "scatterblur/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "scatterblur/errors.hpp"

namespace scatterblur::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

Table parse_table(std::istream& in) {
  Table t;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      t.comments.emplace_back(line.substr(line.find('#') + 1));
      continue;
    }
    const auto fields = split(view);
    if (!have_header) {
      for (const auto f : fields) {
        if (f.empty()) throw ParseError(lineno, 0, "empty column name in header");
        t.columns.emplace_back(f);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw ParseError(lineno, 0,
                       "expected " + std::to_string(t.columns.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = parse_double(fields[c]);
      if (!v) {
        throw ParseError(lineno, c + 1, "not a number: '" + std::string(fields[c]) + "'");
      }
      if (!std::isfinite(*v)) throw ParseError(lineno, c + 1, "non-finite value");
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw EmptyInputError("empty input: no header line");
  if (rows.empty()) throw EmptyInputError("empty input: no data rows");
  t.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      t.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return t;
}

Table read_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_table(in);
}

void write_table(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << '#' << c << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < table.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.data.cols(); ++c) {
      out << (c ? "," : "") << format_double(table.data(r, c));
    }
    out << '\n';
  }
}

void write_table(const std::filesystem::path& path, const Table& table) {
  auto out = open_output(path);
  write_table(out, table);
  if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

MeasurementSet PointFile::measurements() const {
  try {
    return MeasurementSet(locations, values);
  } catch (const DuplicateLocationError& e) {
    const std::size_t a = line_numbers.at(e.first());
    const std::size_t b = line_numbers.at(e.second());
    throw ParseError(b, 0,
                     "duplicate location: lines " + std::to_string(a) + " and " +
                         std::to_string(b));
  }
}

PointFile parse_points(std::istream& in) {
  Table t = parse_table(in);
  std::size_t value_col = t.columns.size();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == "value") {
      value_col = c;
      break;
    }
  }
  if (value_col == t.columns.size()) throw ParseError(0, 0, "header has no 'value' column");
  if (value_col == 0) throw ParseError(0, 1, "need at least one coordinate column before 'value'");
  const std::size_t extra = t.columns.size() - value_col - 1;
  if (extra > 1 || (extra == 1 && t.columns.back() != "sd")) {
    throw ParseError(0, value_col + 2, "only an 'sd' column may follow 'value'");
  }

  PointFile pf;
  pf.coordinate_columns.assign(t.columns.begin(), t.columns.begin() + static_cast<long>(value_col));
  const auto d = static_cast<Eigen::Index>(value_col);
  pf.locations = t.data.leftCols(d);
  pf.values = t.data.col(d);
  if (extra == 1) {
    pf.sd = t.data.col(d + 1);
    for (Eigen::Index r = 0; r < pf.sd->size(); ++r) {
      if (!((*pf.sd)(r) > 0.0)) {
        throw ParseError(t.line_numbers[static_cast<std::size_t>(r)], value_col + 2,
                         "sd must be positive");
      }
    }
  }
  pf.line_numbers = std::move(t.line_numbers);
  return pf;
}

PointFile read_points(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_points(in);
}

Eigen::MatrixXd project_degrees(const Eigen::MatrixXd& lonlat, double center_lon,
                                double center_lat) {
  if (lonlat.cols() != 2) throw DomainError("projection needs exactly two columns (lon, lat)");
  auto check_lat = [](double lat) {
    if (!(lat > -90.0 && lat < 90.0)) {
      throw DomainError("latitude " + std::to_string(lat) + " outside (-90, 90)");
    }
  };
  check_lat(center_lat);
  constexpr double deg = std::numbers::pi / 180.0;
  const double coslat = std::cos(center_lat * deg);
  Eigen::MatrixXd out(lonlat.rows(), 2);
  for (Eigen::Index i = 0; i < lonlat.rows(); ++i) {
    check_lat(lonlat(i, 1));
    double dlon = lonlat(i, 0) - center_lon;
    dlon = std::remainder(dlon, 360.0);
    out(i, 0) = kEarthRadiusKm * coslat * dlon * deg;
    out(i, 1) = kEarthRadiusKm * (lonlat(i, 1) - center_lat) * deg;
  }
  return out;
}

MeasurementSet project_degrees(const MeasurementSet& ms, double center_lon, double center_lat) {
  return MeasurementSet(project_degrees(ms.locations(), center_lon, center_lat), ms.values());
}

void write_mixture_csv(std::ostream& out, const GreenMixture& mixture) {
  const auto& hp = mixture.helmholtz();
  const auto& qp = mixture.quadrature();
  out << "# green_mixture ell=" << format_double(hp.ell) << " beta=" << format_double(hp.beta)
      << " h=" << format_double(qp.h) << " m_minus=" << qp.m_minus << " m_plus=" << qp.m_plus
      << " dim=" << mixture.dim() << " first_index=" << mixture.terms().front().index
      << " dropped=" << mixture.dropped_terms() << '\n';
  out << "c,rho\n";
  for (const auto& t : mixture.terms()) {
    out << format_double(t.weight) << ',' << format_double(t.variance) << '\n';
  }
}

GreenMixture read_mixture_csv(std::istream& in) {
  const Table t = parse_table(in);
  std::map<std::string, std::string> kv;
  bool found = false;
  for (const auto& c : t.comments) {
    std::istringstream ss(c);
    std::string tok;
    ss >> tok;
    if (tok != "green_mixture") continue;
    found = true;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("malformed mixture header token '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  if (!found) throw ParseError("missing '# green_mixture' header comment");
  if (t.columns.size() != 2 || t.columns[0] != "c" || t.columns[1] != "rho") {
    throw ParseError("mixture CSV must have columns c,rho");
  }
  auto number = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("mixture header lacks '" + key + "'");
    const auto v = parse_double(it->second);
    if (!v) throw ParseError("mixture header value for '" + key + "' is not a number");
    return *v;
  };
  const HelmholtzParams hp{number("ell"), number("beta")};
  const QuadratureParams qp{number("h"), static_cast<int>(number("m_minus")),
                            static_cast<int>(number("m_plus"))};
  const int dim = static_cast<int>(number("dim"));
  const int first = static_cast<int>(number("first_index"));
  const auto dropped = static_cast<std::size_t>(number("dropped"));
  std::vector<GaussianTerm> terms;
  for (Eigen::Index r = 0; r < t.data.rows(); ++r) {
    terms.push_back({first + static_cast<int>(r), t.data(r, 0), t.data(r, 1)});
  }
  return GreenMixture(hp, qp, dim, std::move(terms), dropped);
}

void write_spectrum_csv(std::ostream& out, const CirculantSpectrum& spectrum,
                        const std::string& comment) {
  Table t;
  t.comments.push_back(comment);
  t.columns = {"k_index", "k_phys", "eigenvalue", "reference"};
  const auto rows = static_cast<Eigen::Index>(spectrum.unique_count());
  t.data.resize(rows, 4);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    t.data(k, 0) = static_cast<double>(k);
    t.data(k, 1) = spectrum.wavenumbers[kk];
    t.data(k, 2) = spectrum.eigenvalues[kk];
    t.data(k, 3) = spectrum.reference[kk];
  }
  write_table(out, t);
}

EnsembleFiles read_ensemble(const std::filesystem::path& observations,
                            const std::filesystem::path& members) {
  PointFile obs = read_points(observations);
  if (!obs.sd) throw ParseError("observations file '" + observations.string() + "' needs an 'sd' column");
  const Table m = read_table(members);
  if (m.data.rows() != obs.values.size()) {
    throw ParseError("members file has " + std::to_string(m.data.rows()) +
                     " rows, observations file has " + std::to_string(obs.values.size()));
  }
  Ensemble ens(m.data, obs.values, *obs.sd);
  return EnsembleFiles{std::move(obs), std::move(ens)};
}

}  // namespace scatterblur::io
