#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "verify.hpp"

namespace blocktrid {
namespace {

using Sizes = std::vector<std::size_t>;

// Printed 5x5 fixture result, U^* T U.
Matrix fixture_m() {
  const double r2 = std::sqrt(2.0);
  Matrix m(5);
  m(0, 0) = 2.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0;
  m(1, 1) = 2.0;
  m(1, 2) = r2 / 2;
  m(2, 1) = r2;
  m(2, 2) = 1.0;
  m(3, 2) = -r2 / 2;
  return m;
}

TEST(Predicates, MatchDefinitionsExhaustively) {
  const auto coarse = PatternSpec::staircase_coarse();
  const auto refined = PatternSpec::staircase_refined();
  const auto jc = PatternSpec::joint_cyclic();
  const auto hess = PatternSpec::hessenberg();
  const auto fam5 = PatternSpec::family_stride(5);
  for (std::size_t i = 1; i <= 200; ++i)
    for (std::size_t j = 1; j <= 200; ++j) {
      ASSERT_EQ(coarse.allowed(i, j), j <= 3 * i && i <= 3 * j);
      ASSERT_EQ(refined.allowed(i, j), j <= 3 * i && i + 1 <= 3 * j);
      ASSERT_EQ(jc.allowed(i, j), i <= 2 * j && j <= 2 * i + 1);
      ASSERT_EQ(hess.allowed(i, j), i <= j + 1);
      ASSERT_EQ(fam5.allowed(i, j), j <= 5 * i && i <= 5 * j);
      if (refined.allowed(i, j)) { ASSERT_TRUE(coarse.allowed(i, j)); }
    }
}

TEST(Predicates, BlockBandMatchesOracle) {
  const Sizes sizes{2, 4, 12, 36};
  const auto band = PatternSpec::block_band(BlockSchedule(sizes, ScheduleKind::General));
  for (std::size_t i = 1; i <= 54; ++i)
    for (std::size_t j = 1; j <= 54; ++j) {
      const auto bi = oracle::block_index(i, sizes), bj = oracle::block_index(j, sizes);
      ASSERT_EQ(band.allowed(i, j), (bi > bj ? bi - bj : bj - bi) <= 1);
    }
}

TEST(Predicates, PolarBlocksZeroTrailingColumns) {
  const auto p = PatternSpec::polar_blocks(BlockSchedule({1, 2, 6}, ScheduleKind::General));
  EXPECT_TRUE(p.allowed(1, 2));
  EXPECT_FALSE(p.allowed(1, 3));   // A_1 = (P'_1 | 0), P'_1 is 1x1
  EXPECT_TRUE(p.allowed(3, 5));    // A_2 columns 4..5 form P'_2
  EXPECT_FALSE(p.allowed(2, 6));
  EXPECT_TRUE(p.allowed(9, 2));    // B blocks unrestricted
  const auto alt = PatternSpec::polar_blocks(BlockSchedule({1, 2, 6}, ScheduleKind::General), true);
  EXPECT_TRUE(alt.allowed(2, 1));
  EXPECT_FALSE(alt.allowed(3, 1));
  EXPECT_TRUE(alt.allowed(1, 3));
}

TEST(Predicates, TriBlocksTriangularShapes) {
  const auto t = PatternSpec::tri_blocks(BlockSchedule({1, 2, 6}, ScheduleKind::General));
  // B_3 (rows 4..9, cols 2..3): upper triangular leading part, zero below.
  EXPECT_TRUE(t.allowed(4, 2));
  EXPECT_FALSE(t.allowed(5, 2));
  EXPECT_TRUE(t.allowed(5, 3));
  EXPECT_FALSE(t.allowed(6, 3));
  // A_2 (rows 2..3, cols 4..9): local col <= n_2 + local row.
  EXPECT_TRUE(t.allowed(2, 6));
  EXPECT_FALSE(t.allowed(2, 7));
  EXPECT_TRUE(t.allowed(3, 7));
  EXPECT_FALSE(t.allowed(3, 8));
}

TEST(Predicates, SegmentsSplitBlockDiagonally) {
  PatternSpec s = PatternSpec::joint_cyclic();
  s.segments = {2, 3};
  EXPECT_TRUE(s.allowed(1, 2));
  EXPECT_FALSE(s.allowed(2, 3));  // crosses segments
  EXPECT_TRUE(s.allowed(3, 4));   // local (1, 2)
  EXPECT_FALSE(s.allowed(5, 3));  // local (3, 1)
}

TEST(CheckPattern, ZeroMatrixHasNoViolations) {
  EXPECT_TRUE(check_pattern(Matrix(7), PatternSpec::hessenberg()).empty());
  EXPECT_TRUE(check_pattern(Matrix(7), PatternSpec::staircase_refined()).empty());
}

TEST(CheckPattern, RefinedColumnOneSupport) {
  Matrix m(5);
  m(3, 0) = 1.0;  // (4, 1) in 1-based indices
  const auto v = check_pattern(m, PatternSpec::staircase_refined());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].i, 4u);
  EXPECT_EQ(v[0].j, 1u);
  EXPECT_EQ(v[0].magnitude, 1.0);
}

TEST(CheckPattern, FixtureResultIsStaircase) {
  const Matrix m = fixture_m();
  EXPECT_TRUE(check_pattern(m, PatternSpec::staircase_coarse()).empty());
  EXPECT_EQ(m(0, 2), Complex{});
  EXPECT_EQ(m(1, 4), Complex{});
  EXPECT_EQ(m(2, 3), Complex{});
}

TEST(CheckPattern, MonotoneInThreshold) {
  const Matrix m = testing::random_matrix(12, 5);
  std::size_t prev = SIZE_MAX;
  for (double th : {1e-12, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    const std::size_t n = check_pattern(m, PatternSpec::hessenberg(), th).size();
    EXPECT_LE(n, prev);
    prev = n;
  }
}

TEST(ParsePattern, NamesAndErrors) {
  const BlockSchedule s({1, 2, 6}, ScheduleKind::General);
  EXPECT_EQ(parse_pattern("staircase", std::nullopt).kind, PatternKind::StaircaseCoarse);
  EXPECT_EQ(parse_pattern("hessenberg", std::nullopt).kind, PatternKind::Hessenberg);
  EXPECT_EQ(parse_pattern("family:3", std::nullopt).stride, 3u);
  EXPECT_TRUE(parse_pattern("tri-alt", s).transposed);
  EXPECT_THROW(parse_pattern("band", std::nullopt), Error);
  EXPECT_THROW(parse_pattern("zigzag", std::nullopt), Error);
  EXPECT_THROW(parse_pattern("family:x", std::nullopt), Error);
}

TEST(PatternReport, JsonHasPassingFlag) {
  const VerificationReport r = pattern_report(fixture_m(), PatternSpec::staircase_coarse());
  EXPECT_TRUE(r.passing());
  const nlohmann::json j = r.to_json();
  EXPECT_TRUE(j["passing"].get<bool>());
  EXPECT_EQ(j["pattern"]["violation_count"], 0);

  const VerificationReport bad = pattern_report(fixture_m(), PatternSpec::hessenberg(), 1e-10);
  EXPECT_TRUE(bad.passing());  // the fixture happens to be Hessenberg too
  Matrix m = fixture_m();
  m(4, 0) = 1.0;
  EXPECT_FALSE(pattern_report(m, PatternSpec::hessenberg()).passing());
}

}  // namespace
}  // namespace blocktrid
