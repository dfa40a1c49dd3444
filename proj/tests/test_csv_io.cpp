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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "scatterblur/csv_io.hpp"
#include "scatterblur/errors.hpp"

namespace sb = scatterblur;
namespace io = scatterblur::io;
namespace fs = std::filesystem;

namespace {

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

io::Table parse(const std::string& text) {
  std::istringstream in(text);
  return io::parse_table(in);
}

io::PointFile points(const std::string& text) {
  std::istringstream in(text);
  return io::parse_points(in);
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("scatterblur_csv_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path dir_;
};

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(io::format_double(2.0 / 3.0), "0.66666666666666663");
}

TEST(FormatDouble, RoundTripsBitExactly) {
  std::mt19937_64 rng(17);
  std::vector<double> values{0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, std::numbers::pi,
                             std::numeric_limits<double>::max(),
                             std::numeric_limits<double>::min(),
                             std::numeric_limits<double>::denorm_min(),
                             std::nextafter(1.0, 2.0)};
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t b = rng();
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (std::isfinite(v)) values.push_back(v);
  }
  for (double v : values) {
    const auto back = io::parse_double(io::format_double(v));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(bits(*back), bits(v)) << io::format_double(v);
  }
}

TEST(ParseDouble, AcceptsAndRejects) {
  EXPECT_EQ(io::parse_double("1e3"), 1000.0);
  EXPECT_EQ(io::parse_double("+2"), 2.0);
  EXPECT_EQ(io::parse_double("  -3.5 "), -3.5);
  EXPECT_FALSE(io::parse_double("abc"));
  EXPECT_FALSE(io::parse_double("1.0x"));
  EXPECT_FALSE(io::parse_double(""));
  EXPECT_FALSE(io::parse_double("1,2"));
}

TEST(ParseTable, CommentsHeaderAndLineNumbers) {
  const auto t = parse("# first\nx,y\n\n1,2\n# mid\n3, 4\n");
  EXPECT_EQ(t.comments, (std::vector<std::string>{" first", " mid"}));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(t.line_numbers, (std::vector<std::size_t>{4, 6}));
  EXPECT_EQ(t.data(1, 1), 4.0);
}

TEST(ParseTable, Diagnostics) {
  try {
    parse("x,y\n1,2\n3\n");
    FAIL();
  } catch (const sb::ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
  try {
    parse("x,y\n1,2\n3,zz\n");
    FAIL();
  } catch (const sb::ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos);
  }
  try {
    parse("x,y\n1,inf\n");
    FAIL();
  } catch (const sb::ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(parse(""), sb::EmptyInputError);
  EXPECT_THROW(parse("# only a comment\n"), sb::EmptyInputError);
  EXPECT_THROW(parse("x,y\n"), sb::EmptyInputError);
  EXPECT_THROW(parse("x,,y\n1,2,3\n"), sb::ParseError);
}

TEST(WriteTable, RoundTrip) {
  io::Table t;
  t.comments = {" config a=1"};
  t.columns = {"a", "b"};
  t.data = Eigen::MatrixXd::Random(7, 2) * 1e5;
  t.data(0, 0) = 1.0 / 3.0;
  std::ostringstream os;
  io::write_table(os, t);
  const auto back = parse(os.str());
  EXPECT_EQ(back.comments, t.comments);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.data, t.data);
  EXPECT_EQ(os.str().substr(0, 11), "# config a=");
}

TEST(ParsePoints, SingleRow) {
  const auto pf = points("x1,x2,value\n0,0,7\n");
  const auto ms = pf.measurements();
  EXPECT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms.dim(), 2);
  EXPECT_EQ(ms.values()(0), 7.0);
  EXPECT_FALSE(pf.sd.has_value());
  EXPECT_EQ(pf.coordinate_columns, (std::vector<std::string>{"x1", "x2"}));
}

TEST(ParsePoints, DuplicateLocationNamesBothRows) {
  const auto pf = points("x1,value\n0,1\n5,2\n0,3\n");
  try {
    pf.measurements();
    FAIL();
  } catch (const sb::ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("lines 2 and 4"), std::string::npos) << msg;
  }
}

TEST(ParsePoints, NanValueCitesRow) {
  try {
    points("x1,value\n0,1\n1,nan\n");
    FAIL();
  } catch (const sb::ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(ParsePoints, OptionalSdColumn) {
  const auto pf = points("lon,lat,value,sd\n1,2,3,0.5\n4,5,6,2\n");
  ASSERT_TRUE(pf.sd.has_value());
  EXPECT_EQ((*pf.sd)(1), 2.0);
  EXPECT_THROW(points("x,value,sd\n1,2,0\n"), sb::ParseError);
  EXPECT_THROW(points("x,value,other\n1,2,3\n"), sb::ParseError);
  EXPECT_THROW(points("x,y\n1,2\n"), sb::ParseError);
  EXPECT_THROW(points("value,x\n1,2\n"), sb::ParseError);
}

TEST(ProjectDegrees, ArcLengths) {
  Eigen::MatrixXd ll(4, 2);
  ll << -35, 50, -35, 51, -34, 50, 179.5, 50;
  const Eigen::MatrixXd xy = io::project_degrees(ll, -35.0, 50.0);
  const double deg_km = 6371.0 * std::numbers::pi / 180.0;
  EXPECT_EQ(xy(0, 0), 0.0);
  EXPECT_EQ(xy(0, 1), 0.0);
  EXPECT_NEAR(xy(1, 1), 111.19, 0.005);
  EXPECT_NEAR(xy(1, 1), deg_km, 1e-12);
  EXPECT_EQ(xy(1, 0), 0.0);
  EXPECT_NEAR(xy(2, 0), 71.47, 0.005);
  EXPECT_NEAR(xy(2, 0), deg_km * std::cos(50.0 * std::numbers::pi / 180.0), 1e-12);
  // Longitude differences wrap to the short way round.
  EXPECT_NEAR(xy(3, 0), -145.5 * deg_km * std::cos(50.0 * std::numbers::pi / 180.0), 1e-9);
  const Eigen::MatrixXd dateline = io::project_degrees(Eigen::RowVector2d(-179.0, 0.0), 179.0, 0.0);
  EXPECT_NEAR(dateline(0, 0), 2.0 * deg_km, 1e-9);
}

TEST(ProjectDegrees, RejectsPoles) {
  EXPECT_THROW(io::project_degrees(Eigen::RowVector2d(0, 90), 0, 0), sb::DomainError);
  EXPECT_THROW(io::project_degrees(Eigen::RowVector2d(0, 0), 0, -90), sb::DomainError);
  EXPECT_THROW(io::project_degrees(Eigen::MatrixXd::Zero(2, 3), 0, 0), sb::DomainError);
  const sb::MeasurementSet ms(Eigen::RowVector2d(10, 20), Eigen::VectorXd::Constant(1, 4.0));
  const auto p = io::project_degrees(ms, 10, 20);
  EXPECT_EQ(p.values()(0), 4.0);
  EXPECT_EQ(p.locations()(0, 0), 0.0);
}

TEST(MixtureCsv, RoundTrip) {
  const auto mix = sb::gaussian_bsh({1.7, 0.5}, {0.2, 40, 28}, 3);
  std::ostringstream os;
  io::write_mixture_csv(os, mix);
  std::istringstream in(os.str());
  const auto back = io::read_mixture_csv(in);
  EXPECT_EQ(back.helmholtz().ell, 1.7);
  EXPECT_EQ(back.helmholtz().beta, 0.5);
  EXPECT_EQ(back.quadrature().h, 0.2);
  EXPECT_EQ(back.quadrature().m_minus, 40);
  EXPECT_EQ(back.quadrature().m_plus, 28);
  EXPECT_EQ(back.dim(), 3);
  EXPECT_EQ(back.dropped_terms(), mix.dropped_terms());
  ASSERT_EQ(back.size(), mix.size());
  for (std::size_t n = 0; n < mix.size(); ++n) {
    EXPECT_EQ(back.terms()[n].index, mix.terms()[n].index);
    EXPECT_EQ(bits(back.terms()[n].weight), bits(mix.terms()[n].weight));
    EXPECT_EQ(bits(back.terms()[n].variance), bits(mix.terms()[n].variance));
  }
  std::istringstream bad("c,rho\n1,2\n");
  EXPECT_THROW(io::read_mixture_csv(bad), sb::ParseError);
}

TEST(SpectrumCsv, Layout) {
  const auto op = sb::BlurOperator::prepare(fixture::circle_config(), fixture::circle_points());
  const auto spec = sb::circulant_eigenvalues(op);
  std::ostringstream os;
  io::write_spectrum_csv(os, spec, " echo");
  const auto t = parse(os.str());
  EXPECT_EQ(t.comments.front(), " echo");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"k_index", "k_phys", "eigenvalue", "reference"}));
  ASSERT_EQ(t.data.rows(), 51);
  for (Eigen::Index k = 0; k < 51; ++k) {
    EXPECT_EQ(t.data(k, 0), static_cast<double>(k));
    EXPECT_EQ(t.data(k, 2), spec.eigenvalues[static_cast<std::size_t>(k)]);
    EXPECT_EQ(t.data(k, 3), spec.reference[static_cast<std::size_t>(k)]);
  }
}

TEST_F(TempDir, FilesRoundTrip) {
  io::Table t;
  t.columns = {"v"};
  t.data = Eigen::VectorXd::LinSpaced(5, 0.1, 0.9);
  io::write_table(dir_ / "t.csv", t);
  EXPECT_EQ(io::read_table(dir_ / "t.csv").data, t.data);
  EXPECT_THROW(io::read_table(dir_ / "missing.csv"), sb::ParseError);
  const auto pf = io::read_points(write("p.csv", "x,value\n1,2\n"));
  EXPECT_EQ(pf.values(0), 2.0);
}

TEST_F(TempDir, ReadEnsemble) {
  const auto obs = write("obs.csv", "x,y,value,sd\n0,0,1,0.5\n1,0,2,0.5\n0,1,3,1\n");
  const auto mem = write("mem.csv", "m1,m2\n1,2\n2,3\n3,4\n");
  const auto files = io::read_ensemble(obs, mem);
  EXPECT_EQ(files.ensemble.member_count(), 2);
  EXPECT_EQ(files.ensemble.obs_sd()(2), 1.0);
  EXPECT_EQ(files.ensemble.members()(1, 1), 3.0);
  EXPECT_THROW(io::read_ensemble(obs, write("short.csv", "m1\n1\n2\n")), sb::ParseError);
  EXPECT_THROW(io::read_ensemble(write("nosd.csv", "x,value\n0,1\n1,2\n0.5,3\n"), mem), sb::ParseError);
}

}  // namespace
