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

#include "scatterblur/commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "scatterblur/assimilation.hpp"
#include "scatterblur/blur_op.hpp"
#include "scatterblur/csv_io.hpp"
#include "scatterblur/errors.hpp"
#include "scatterblur/kernel_approx.hpp"
#include "scatterblur/rbf_interp.hpp"
#include "scatterblur/spectral_diag.hpp"
#include "scatterblur/synthetic.hpp"

namespace scatterblur::cli {

namespace {

using io::format_double;

/// Settings shared by the operator-building subcommands.
struct Common {
  double ell = 1.0;
  double beta = 1.0;
  double h = 0.2;
  int m_minus = 32;
  int m_plus = 28;
  std::optional<double> rbf_sd;
  bool normalize = false;
  double min_sep = 0.0;
  bool detrend = false;
  std::uint64_t seed = 0;
  std::string project;
  double solver_tol = 1e-8;
};

void add_kernel_options(CLI::App& app, Common& c) {
  app.add_option("--ell", c.ell, "Helmholtz length scale (0 = no blur)")->capture_default_str();
  app.add_option("--beta", c.beta, "Helmholtz exponent")->capture_default_str();
  app.add_option("--h", c.h, "quadrature step")->capture_default_str();
  app.add_option("--m-minus", c.m_minus, "negative-index quadrature terms")->capture_default_str();
  app.add_option("--m-plus", c.m_plus, "positive-index quadrature terms")->capture_default_str();
}

void add_blur_options(CLI::App& app, Common& c) {
  add_kernel_options(app, c);
  app.add_option("--rbf-sd", c.rbf_sd, "RBF standard deviation (default: command specific)");
  app.add_flag("--normalize", c.normalize, "rescale so the constant vector keeps unit norm");
  app.add_option("--solver-tol", c.solver_tol, "relative residual tolerance of the RBF solve")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void add_point_options(CLI::App& app, Common& c) {
  app.add_option("--min-sep", c.min_sep, "thin points closer than this (0 = keep all)")
      ->capture_default_str();
  app.add_option("--project", c.project,
                 "project lon,lat degrees to km about LON,LAT before blurring");
}

BlurConfig make_config(const Common& c, double rbf_sd) {
  BlurConfig bc;
  bc.helmholtz = {c.ell, c.beta};
  bc.quadrature = {c.h, c.m_minus, c.m_plus};
  bc.rbf_sd = rbf_sd;
  bc.normalize = c.normalize;
  bc.solver.residual_tolerance = c.solver_tol;
  return bc;
}

/// key=value pairs of the resolved configuration, in a fixed order.
class Echo {
 public:
  explicit Echo(const std::string& command) : text_(" scatterblur " + command) {}
  Echo& add(const std::string& key, double v) { return add(key, format_double(v)); }
  Echo& add(const std::string& key, const std::string& v) {
    text_ += " " + key + "=" + (v.empty() ? std::string("none") : v);
    return *this;
  }
  Echo& add_int(const std::string& key, long long v) { return add(key, std::to_string(v)); }
  Echo& add_bool(const std::string& key, bool v) { return add(key, std::string(v ? "true" : "false")); }
  Echo& add_kernel(const Common& c) {
    add("ell", c.ell).add("beta", c.beta).add("h", c.h);
    return add_int("m_minus", c.m_minus).add_int("m_plus", c.m_plus);
  }
  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw ParseError("failed writing '" + path + "'");
}

std::pair<double, double> parse_center(const std::string& spec) {
  const auto comma = spec.find(',');
  const auto lon = io::parse_double(spec.substr(0, comma));
  const auto lat = comma == std::string::npos ? std::nullopt : io::parse_double(spec.substr(comma + 1));
  if (!lon || !lat) throw ParseError("--project expects LON,LAT in degrees, got '" + spec + "'");
  return {*lon, *lat};
}

/// Point file after optional projection and thinning. `table` keeps the
/// original columns of the retained rows.
struct LoadedPoints {
  io::Table table;
  Eigen::MatrixXd coords;  ///< coordinates used for distances
  Eigen::VectorXd values;
};

LoadedPoints load_points(const std::string& path, const Common& c) {
  io::PointFile pf = io::read_points(path);
  const MeasurementSet raw = pf.measurements();
  Eigen::MatrixXd coords = raw.locations();
  if (!c.project.empty()) {
    const auto [lon, lat] = parse_center(c.project);
    coords = io::project_degrees(coords, lon, lat);
    validate_locations(coords);
  }
  io::Table table;
  table.columns = pf.coordinate_columns;
  table.columns.emplace_back("value");
  if (pf.sd) table.columns.emplace_back("sd");
  Eigen::MatrixXd all(pf.values.size(), static_cast<Eigen::Index>(table.columns.size()));
  all.leftCols(pf.locations.cols()) = pf.locations;
  all.col(pf.locations.cols()) = pf.values;
  if (pf.sd) all.col(pf.locations.cols() + 1) = *pf.sd;

  std::vector<std::size_t> keep;
  if (c.min_sep > 0.0) {
    keep = thin_indices(coords, c.min_sep);
  } else {
    for (Eigen::Index i = 0; i < coords.rows(); ++i) keep.push_back(static_cast<std::size_t>(i));
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  LoadedPoints lp;
  lp.coords.resize(n, coords.cols());
  lp.values.resize(n);
  table.data.resize(n, all.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(keep[static_cast<std::size_t>(r)]);
    lp.coords.row(r) = coords.row(src);
    lp.values(r) = pf.values(src);
    table.data.row(r) = all.row(src);
  }
  lp.table = std::move(table);
  return lp;
}

double default_rbf_sd(const Common& c, const Eigen::MatrixXd& coords) {
  if (c.rbf_sd) return *c.rbf_sd;
  if (coords.rows() < 2) throw DomainError("need at least two points to pick a default --rbf-sd");
  return mean_nearest_neighbor_distance(coords);
}

Echo point_echo(const std::string& command, const Common& c, double rbf_sd, std::size_t n) {
  Echo e(command);
  e.add_kernel(c).add("rbf_sd", rbf_sd).add_bool("normalize", c.normalize);
  e.add("min_sep", c.min_sep).add_bool("detrend", c.detrend).add("project", c.project);
  e.add("solver_tol", c.solver_tol).add_int("seed", static_cast<long long>(c.seed));
  return e.add_int("points", static_cast<long long>(n));
}

std::string table_text(io::Table& t, const Echo& echo) {
  t.comments.insert(t.comments.begin(), echo.str());
  std::ostringstream os;
  io::write_table(os, t);
  return os.str();
}

void append_column(io::Table& t, const std::string& name, const Eigen::VectorXd& v) {
  t.columns.push_back(name);
  t.data.conservativeResize(Eigen::NoChange, t.data.cols() + 1);
  t.data.col(t.data.cols() - 1) = v;
}

std::string cmd_blur(const std::string& input, const Common& c) {
  LoadedPoints lp = load_points(input, c);
  const double sd = default_rbf_sd(c, lp.coords);
  const BlurOperator op = BlurOperator::prepare(make_config(c, sd), lp.coords);
  append_column(lp.table, "blurred", op.apply(lp.values));
  return table_text(lp.table, point_echo("blur", c, sd, op.size()));
}

std::string cmd_separate(const std::string& input, const Common& c) {
  LoadedPoints lp = load_points(input, c);
  const double sd = default_rbf_sd(c, lp.coords);
  const BlurOperator op = BlurOperator::prepare(make_config(c, sd), lp.coords);
  const ScaleSeparation sep = scale_separate(op, MeasurementSet(lp.coords, lp.values), c.detrend);
  append_column(lp.table, "large", sep.large);
  append_column(lp.table, "small", sep.small);
  append_column(lp.table, "trend_removed", sep.deviations);
  Echo echo = point_echo("separate", c, sd, op.size());
  for (Eigen::Index i = 0; i < sep.trend.size(); ++i) {
    echo.add("trend" + std::to_string(i), sep.trend(i));
  }
  return table_text(lp.table, echo);
}

struct SpectrumArgs {
  std::size_t n = 100;
  double spacing = 1.0;
  std::string geometry;
};

std::string cmd_spectrum(const SpectrumArgs& a, const Common& c) {
  Eigen::MatrixXd coords;
  double scale = a.spacing;
  if (a.geometry.empty()) {
    coords = circle_locations(a.n, a.spacing);
  } else {
    coords = io::read_table(a.geometry).data;
    validate_locations(coords);
    scale = mean_nearest_neighbor_distance(coords);
  }
  const double sd = c.rbf_sd ? *c.rbf_sd : 2.5 * scale;
  const BlurOperator op = BlurOperator::prepare(make_config(c, sd), coords);
  const CirculantSpectrum spec = circulant_eigenvalues(op);
  Echo echo("spectrum");
  echo.add_kernel(c).add("rbf_sd", sd).add_bool("normalize", c.normalize);
  echo.add("solver_tol", c.solver_tol).add("geometry", a.geometry.empty() ? "circle" : a.geometry);
  echo.add_int("n", static_cast<long long>(coords.rows())).add("spacing", spec.spacing);
  std::ostringstream os;
  io::write_spectrum_csv(os, spec, echo.str());
  return os.str();
}

struct EssArgs {
  std::vector<double> ells{0.0, 1.0, 2.0, 4.0};
  std::size_t trials = 50;
  std::size_t members = 80;
  std::size_t points = 90;
  bool nn_units = false;
  std::string obs;
  std::string members_file;
};

std::string cmd_ess(const EssArgs& a, const Common& c) {
  io::Table t;
  t.columns = {"ell", "ell_multiple", "trial", "ess"};
  Echo echo("ess");
  echo.add("beta", c.beta).add("h", c.h).add_int("m_minus", c.m_minus).add_int("m_plus", c.m_plus);
  std::string ell_list;
  for (double e : a.ells) ell_list += (ell_list.empty() ? "" : ";") + format_double(e);
  echo.add("ells", ell_list);

  std::vector<std::array<double, 4>> rows;
  if (a.obs.empty() != a.members_file.empty()) {
    throw ParseError("--obs and --members-file must be given together");
  }
  if (a.obs.empty()) {
    synthetic::EssExperimentConfig cfg;
    cfg.n_points = a.points;
    cfg.n_members = a.members;
    cfg.trials = a.trials;
    cfg.ell_multiples = a.ells;
    cfg.beta = c.beta;
    cfg.quadrature = {c.h, c.m_minus, c.m_plus};
    if (c.rbf_sd) cfg.rbf_sd_multiple = *c.rbf_sd;
    cfg.seed = c.seed;
    echo.add("source", std::string("synthetic")).add("rbf_sd_multiple", cfg.rbf_sd_multiple);
    echo.add_int("points", static_cast<long long>(cfg.n_points));
    echo.add_int("members", static_cast<long long>(cfg.n_members));
    echo.add_int("trials", static_cast<long long>(cfg.trials));
    echo.add_int("seed", static_cast<long long>(cfg.seed));
    for (const auto& r : synthetic::run_ess_experiment(cfg)) {
      rows.push_back({r.ell, r.ell_multiple, static_cast<double>(r.trial), r.ess});
    }
  } else {
    io::EnsembleFiles files = io::read_ensemble(a.obs, a.members_file);
    Eigen::MatrixXd coords = files.observations.measurements().locations();
    if (!c.project.empty()) {
      const auto [lon, lat] = parse_center(c.project);
      coords = io::project_degrees(coords, lon, lat);
      validate_locations(coords);
    }
    const double nn = mean_nearest_neighbor_distance(coords);
    const double sd = default_rbf_sd(c, coords);
    echo.add("source", a.obs + ";" + a.members_file).add("rbf_sd", sd);
    echo.add_bool("normalize", c.normalize).add_bool("nn_units", a.nn_units);
    echo.add("project", c.project).add("nn_distance", nn);
    for (double e : a.ells) {
      Common ci = c;
      ci.ell = a.nn_units ? e * nn : e;
      const BlurOperator op = BlurOperator::prepare(make_config(ci, sd), coords);
      const WeightSet ws = sir_weights(files.ensemble, op);
      rows.push_back({ci.ell, a.nn_units ? e : ci.ell / nn, 0.0, ws.ess});
    }
  }
  t.data.resize(static_cast<Eigen::Index>(rows.size()), 4);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index k = 0; k < 4; ++k) {
      t.data(static_cast<Eigen::Index>(r), k) = rows[r][static_cast<std::size_t>(k)];
    }
  }
  return table_text(t, echo);
}

std::string cmd_covariance(const std::string& input, const Common& c, const DenseOptions& dense) {
  LoadedPoints lp = load_points(input, c);
  const double sd = default_rbf_sd(c, lp.coords);
  const BlurOperator op = BlurOperator::prepare(make_config(c, sd), lp.coords);
  const CovarianceReport rep = implied_covariance_check(op, dense);
  io::Table t;
  t.columns = {"min_eigenvalue", "max_eigenvalue", "symmetric", "positive_definite"};
  t.data.resize(1, 4);
  t.data << rep.min_eigenvalue, rep.max_eigenvalue, rep.symmetric ? 1.0 : 0.0,
      rep.positive_definite ? 1.0 : 0.0;
  Echo echo = point_echo("covariance", c, sd, op.size());
  echo.add_int("max_dense", static_cast<long long>(dense.max_size));
  echo.add_bool("allow_large", dense.allow_large);
  return table_text(t, echo);
}

std::string cmd_mixture(int dim, const Common& c) {
  const GreenMixture mix = gaussian_bsh({c.ell, c.beta}, {c.h, c.m_minus, c.m_plus}, dim);
  Echo echo("mixture");
  echo.add_kernel(c).add_int("dim", dim);
  std::ostringstream os;
  os << '#' << echo.str() << '\n';
  io::write_mixture_csv(os, mix);
  return os.str();
}

std::string cmd_kernel_error(int dim, double k_max, std::size_t samples, const Common& c) {
  const GreenMixture mix = gaussian_bsh({c.ell, c.beta}, {c.h, c.m_minus, c.m_plus}, dim);
  io::Table t;
  t.columns = {"k", "approx", "exact", "rel_err"};
  const auto prof = relative_error_profile(mix, k_max, samples);
  t.data.resize(static_cast<Eigen::Index>(prof.size()), 4);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    t.data.row(r) << prof[i].k, prof[i].approx, prof[i].exact, prof[i].rel_err;
  }
  Echo echo("kernel-error");
  echo.add_kernel(c).add_int("dim", dim).add("k_max", k_max);
  echo.add_int("samples", static_cast<long long>(samples));
  return table_text(t, echo);
}

const char* kind_name(int code) {
  switch (code) {
    case kParseFailure: return "parse";
    case kConditioning: return "conditioning";
    case kGuard: return "guard";
    case kDomain: return "domain";
    default: return "internal";
  }
}

void report(std::ostream& err, int code, std::string message) {
  for (char& ch : message) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  err << "error code=" << code << " kind=" << kind_name(code) << " message=" << message << '\n';
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ParseError*>(&e)) return kParseFailure;
  if (dynamic_cast<const ConditioningError*>(&e)) return kConditioning;
  if (dynamic_cast<const GuardError*>(&e)) return kGuard;
  if (dynamic_cast<const DomainError*>(&e)) return kDomain;
  return kInternal;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattered-data blur built on a Gaussian approximation of a Helmholtz Green's function"};
  app.name("scatterblur");
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  Common c;
  std::string input;
  std::string output = "-";

  auto* blur = app.add_subcommand("blur", "blur a point file; adds a 'blurred' column");
  auto* separate = app.add_subcommand("separate", "split values into large and small scales");
  for (auto* sub : {blur, separate}) {
    sub->add_option("input", input, "point CSV (coordinates, value[, sd])")->required();
    sub->add_option("output", output, "output CSV ('-' for stdout)");
    add_blur_options(*sub, c);
    add_point_options(*sub, c);
  }
  separate->add_flag("--detrend", c.detrend, "remove a least-squares linear trend first");

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "circulant eigenvalues of the blur");
  spectrum->add_option("output", output, "output CSV ('-' for stdout)");
  add_blur_options(*spectrum, c);
  spectrum->add_option("--n", sa.n, "points on the circle")->capture_default_str();
  spectrum->add_option("--spacing", sa.spacing, "chord length between neighbours")
      ->capture_default_str();
  spectrum->add_option("--geometry", sa.geometry, "CSV of coordinates with circulant symmetry");

  EssArgs ea;
  auto* ess_cmd = app.add_subcommand("ess", "effective sample size of blurred SIR weights");
  ess_cmd->add_option("output", output, "output CSV ('-' for stdout)");
  add_blur_options(*ess_cmd, c);
  ess_cmd->add_option("--project", c.project, "project lon,lat degrees to km about LON,LAT");
  ess_cmd->add_option("--ells", ea.ells, "comma-separated ell values")->delimiter(',');
  ess_cmd->add_option("--trials", ea.trials, "synthetic trials")->capture_default_str();
  ess_cmd->add_option("--members", ea.members, "synthetic ensemble size")->capture_default_str();
  ess_cmd->add_option("--points", ea.points, "synthetic observation count")->capture_default_str();
  ess_cmd->add_flag("--nn-units", ea.nn_units,
                    "with --obs: ell values are multiples of the mean nearest-neighbour distance");
  ess_cmd->add_option("--obs", ea.obs, "observations CSV (coordinates, value, sd)");
  ess_cmd->add_option("--members-file", ea.members_file, "ensemble CSV, one column per member");

  DenseOptions dense;
  auto* covariance =
      app.add_subcommand("covariance", "check that S^T S is symmetric positive definite");
  covariance->add_option("input", input, "point CSV (coordinates, value[, sd])")->required();
  covariance->add_option("output", output, "output CSV ('-' for stdout)");
  add_blur_options(*covariance, c);
  add_point_options(*covariance, c);
  covariance->add_option("--max-dense", dense.max_size, "largest N for a dense matrix")
      ->capture_default_str();
  covariance->add_flag("--allow-large", dense.allow_large, "lift the --max-dense guard");

  int dim = 2;
  auto* mixture = app.add_subcommand("mixture", "write the Gaussian mixture weights and variances");
  mixture->add_option("output", output, "output CSV ('-' for stdout)");
  add_kernel_options(*mixture, c);
  mixture->add_option("--dim", dim, "spatial dimension")->capture_default_str();

  double k_max = 49.0;
  std::size_t samples = 500;
  auto* kerr = app.add_subcommand("kernel-error", "Fourier-space relative error of the mixture");
  kerr->add_option("output", output, "output CSV ('-' for stdout)");
  add_kernel_options(*kerr, c);
  kerr->add_option("--dim", dim, "spatial dimension")->capture_default_str();
  kerr->add_option("--k-max", k_max, "largest wavenumber")->capture_default_str();
  kerr->add_option("--samples", samples, "grid points on [0, k-max]")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    report(err, kParseFailure, e.what());
    return kParseFailure;
  }

  try {
    std::string content;
    if (blur->parsed()) {
      content = cmd_blur(input, c);
    } else if (separate->parsed()) {
      content = cmd_separate(input, c);
    } else if (spectrum->parsed()) {
      content = cmd_spectrum(sa, c);
    } else if (ess_cmd->parsed()) {
      content = cmd_ess(ea, c);
    } else if (covariance->parsed()) {
      content = cmd_covariance(input, c, dense);
    } else if (mixture->parsed()) {
      content = cmd_mixture(dim, c);
    } else {
      content = cmd_kernel_error(dim, k_max, samples, c);
    }
    emit(output, content, out);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    report(err, code, e.what());
    return code;
  }
  return kSuccess;
}

}  // namespace scatterblur::cli
