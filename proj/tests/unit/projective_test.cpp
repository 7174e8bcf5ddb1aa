#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fanoscope/error.hpp"
#include "fanoscope/projective.hpp"

namespace fanoscope {
namespace {

std::uint64_t gaussian_lines(std::uint64_t q) { return (q * q * q * q * q - 1) * (q * q * q * q - 1) / ((q * q - 1) * (q - 1)); }

TEST(Lines, CountsInP2AndP4) {
  EXPECT_EQ(enumerate_lines(Field::get(3), 2).size(), 13u);
  EXPECT_EQ(enumerate_lines(Field::get(3), 4).size(), 1210u);
  for (std::uint32_t q : {3u, 5u}) EXPECT_EQ(enumerate_lines(Field::get(q), 4).size(), gaussian_lines(q));
  EXPECT_EQ(line_count(7, 4), gaussian_lines(7));
}

TEST(Lines, EnumerationIsDistinctAndCanonical) {
  const Field& F = Field::get(3, 2);
  std::set<Line> seen;
  for_each_line(F, 3, [&](const Line& L) {
    EXPECT_TRUE(seen.insert(L).second);
    EXPECT_EQ(make_line(F, L.row(0), L.row(1)), L);
  });
  EXPECT_EQ(seen.size(), line_count(9, 3));
}

TEST(Lines, MeetsAgreesWithPointSets) {
  const Field& F = Field::get(3);
  const auto lines = enumerate_lines(F, 3);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Line& L = lines[rng() % lines.size()];
    const Line& M = lines[rng() % lines.size()];
    std::set<Point> a;
    for (const auto& p : points_of_line(F, L)) a.insert(p);
    bool common = false;
    for (const auto& p : points_of_line(F, M)) common |= a.count(p) > 0;
    EXPECT_EQ(line_meets(F, L, M), common);
    if (common && L != M) {
      const auto x = meet_point(F, L, M);
      ASSERT_TRUE(x.has_value());
      EXPECT_TRUE(a.count(*x));
    }
  }
}

TEST(Lines, FrobeniusAndRestriction) {
  const Field& F = Field::get(5);
  const Field& E = Field::get(5, 2);
  const Embedding& e = Embedding::get(F, E);
  const Line L = make_line(F, {1, 2, 0, 3, 4}, {0, 1, 1, 1, 0});
  const Line LE = map_line(e, L);
  EXPECT_EQ(frobenius(E, LE, 1), LE);
  EXPECT_EQ(restrict_line(e, LE), std::optional<Line>(L));
  const Line N = make_line(E, {1, 5, 0, 0, 0}, {0, 0, 1, 0, 0});  // 5 is the code of x
  EXPECT_NE(frobenius(E, N, 1), N);
  EXPECT_EQ(restrict_line(e, N), std::nullopt);
}

TEST(Residual, ThirdLineOfTriangle) {
  // x y z on P^2: residual of {x=0} and {y=0} is {z=0}.
  const Field& F = Field::get(5);
  HomogeneousForm f(F, 3, 3);
  f.add_term(make_exponent({1, 1, 1}), 1);
  const Subspace plane = make_subspace(F, identity(3));
  const Line X = make_line(F, {0, 1, 0}, {0, 0, 1});
  const Line Y = make_line(F, {1, 0, 0}, {0, 0, 1});
  const Line Z = make_line(F, {1, 0, 0}, {0, 1, 0});
  const Residual r = residual_line(f, plane, X, Y);
  EXPECT_EQ(r.line, Z);
  EXPECT_EQ(r.multiplicity, 1);
}

TEST(Residual, DoubledLine) {
  // x^2 y: residual of {x=0},{x=0} is {y=0}; residual of {x=0},{y=0} is {x=0} with multiplicity 2.
  const Field& F = Field::get(7);
  HomogeneousForm f(F, 3, 3);
  f.add_term(make_exponent({2, 1, 0}), 1);
  const Subspace plane = make_subspace(F, identity(3));
  const Line X = make_line(F, {0, 1, 0}, {0, 0, 1});
  const Line Y = make_line(F, {1, 0, 0}, {0, 0, 1});
  EXPECT_EQ(residual_line(f, plane, X, X).line, Y);
  const Residual r = residual_line(f, plane, X, Y);
  EXPECT_EQ(r.line, X);
  EXPECT_EQ(r.multiplicity, 2);
}

TEST(Residual, Errors) {
  const Field& F = Field::get(5);
  HomogeneousForm f(F, 3, 3);
  f.add_term(make_exponent({1, 1, 1}), 1);
  const Subspace plane = make_subspace(F, identity(3));
  const Line X = make_line(F, {0, 1, 0}, {0, 0, 1});
  const Line D = make_line(F, {1, 1, 0}, {0, 0, 1});  // x = y, not on the cubic
  try {
    residual_line(f, plane, X, D);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOnCubic);
  }
  try {
    residual_line(HomogeneousForm(F, 3, 3), plane, X, X);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PlaneContained);
  }
}

TEST(Residual, InsideAmbientPlane) {
  // Plane {x3 = x4 = 0} of P^4 with f restricting to x0 x1 x2.
  const Field& F = Field::get(7);
  HomogeneousForm f(F, 5, 3);
  f.add_term(make_exponent({1, 1, 1, 0, 0}), 1);
  f.add_term(make_exponent({0, 0, 0, 3, 0}), 2);
  f.add_term(make_exponent({1, 0, 0, 1, 1}), 3);
  const Subspace plane = make_subspace(F, {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}});
  const Line A = make_line(F, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0});
  const Line B = make_line(F, {1, 0, 0, 0, 0}, {0, 0, 1, 0, 0});
  const Line C = make_line(F, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0});
  EXPECT_EQ(residual_line(f, plane, A, B).line, C);
  EXPECT_TRUE(vanishes_on_line(f, C));
}

}  // namespace
}  // namespace fanoscope
