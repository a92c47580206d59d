#include "kronfit/serialize.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "kronfit/errors.hpp"
#include "kronfit/rng.hpp"
#include "oracle_helpers.hpp"

namespace kronfit {
namespace {

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + name;
}

TEST(FormatDoubleOp, RoundTripsBitExact) {
  const double values[] = {0.0,       1.0,           -1.0,
                           0.5,       1.0 / 3.0,     M_PI,
                           1e-300,    5e-324,        1.7976931348623157e308,
                           -17.25,    6.02214076e23, -0.0};
  for (double v : values) {
    const std::string text = format_double(v);
    const double back = std::strtod(text.c_str(), nullptr);
    EXPECT_EQ(back, v) << text;
    EXPECT_EQ(std::signbit(back), std::signbit(v)) << text;
  }
}

TEST(FormatDoubleOp, StableSpellings) {
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(ToJsonOp, RoundTripBitExact) {
  CounterRng rng(Seed{20, 0}, rng_domain::kTest);
  const KronPoint p = testing::random_point(DimVector({2, 3}), rng);
  const KronPoint q = kron_point_from_json(to_json(p));
  ASSERT_EQ(q.k(), p.k());
  for (int a = 0; a < p.k(); ++a) {
    EXPECT_EQ(q.factor(a).mat(), p.factor(a).mat());
  }
}

TEST(SaveLoadKronPointOp, FileRoundTrip) {
  CounterRng rng(Seed{21, 0}, rng_domain::kTest);
  const KronPoint p = testing::random_point(DimVector({3, 2, 2}), rng);
  const std::string path = temp_path("point_roundtrip.json");
  save_kron_point(p, path);
  const KronPoint q = load_kron_point(path);
  for (int a = 0; a < p.k(); ++a) {
    EXPECT_EQ(q.factor(a).mat(), p.factor(a).mat());
  }
}

TEST(FromJsonOp, RejectsMalformedDocuments) {
  EXPECT_THROW(kron_point_from_json("not json at all"), FormatError);
  EXPECT_THROW(kron_point_from_json("{\"factors\": [[1.0]]}"), FormatError);
  EXPECT_THROW(kron_point_from_json("{\"dims\": [1]}"), FormatError);
  EXPECT_THROW(kron_point_from_json("{\"dims\": \"two\", \"factors\": []}"),
               FormatError);
  // Factor count disagrees with dims.
  EXPECT_THROW(
      kron_point_from_json("{\"dims\": [2, 2], \"factors\": [[1,0,0,1]]}"),
      FormatError);
  // Entry count disagrees with the declared dimension.
  EXPECT_THROW(
      kron_point_from_json("{\"dims\": [2], \"factors\": [[1, 0, 0]]}"),
      FormatError);
  // Well-formed JSON but not a positive definite factor.
  EXPECT_THROW(
      kron_point_from_json("{\"dims\": [2], \"factors\": [[1,0,0,-1]]}"),
      FormatError);
  EXPECT_THROW(
      kron_point_from_json("{\"dims\": [2], \"factors\": [[0,0,0,0]]}"),
      FormatError);
}

TEST(FromJsonOp, AcceptsHandWrittenDocument) {
  const KronPoint p = kron_point_from_json(
      "{\"dims\": [2, 2], \"factors\": [[2, 0, 0, 2], [1, 0, 0, 1]]}");
  EXPECT_EQ(p.k(), 2);
  EXPECT_NEAR(p.factor(0).trace(), 4.0, 1e-12);
  EXPECT_NEAR(p.factor(1).trace(), 2.0, 1e-12);
}

TEST(LoadKronPointOp, MissingFileRaises) {
  EXPECT_THROW(load_kron_point(temp_path("no_such_point.json")), Error);
}

TEST(SaveKronPointOp, UnwritablePathRaises) {
  CounterRng rng(Seed{22, 0}, rng_domain::kTest);
  const KronPoint p = testing::random_point(DimVector({2}), rng);
  EXPECT_THROW(
      save_kron_point(p, temp_path("missing_dir/point.json")), Error);
}

}  // namespace
}  // namespace kronfit
