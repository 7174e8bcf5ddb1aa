#include <gtest/gtest.h>

#include <random>

#include "fanoscope/error.hpp"
#include "fanoscope/forms.hpp"

namespace fanoscope {
namespace {

HomogeneousForm random_form(const Field& F, int n, int d, std::mt19937_64& rng) {
  HomogeneousForm f(F, n, d);
  Exponent e{};
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      e[i] = static_cast<std::uint8_t>(left);
      f.add_term(e, static_cast<Elt>(rng() % F.size()));
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = static_cast<std::uint8_t>(a);
      rec(i + 1, left - a);
    }
  };
  rec(0, d);
  return f;
}

TEST(UPoly, DivmodReconstructs) {
  const Field& F = Field::get(7);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Elt> a(6), b(3);
    for (auto& x : a) x = rng() % 7;
    for (auto& x : b) x = rng() % 7;
    b.back() = 1 + rng() % 6;
    const UPoly A(F, a), B(F, b);
    const auto [q, r] = A.divmod(B);
    EXPECT_EQ(q * B + r, A);
    EXPECT_LT(r.degree(), B.degree());
  }
}

TEST(UPoly, RootsWithMultiplicity) {
  const Field& F = Field::get(5);
  // (x - 1)^2 (x - 3) = x^3 - 5x^2 + 7x - 3.
  const UPoly f(F, {F.from_int(-3), 7 % 5, F.from_int(-5), 1});
  const auto roots = roots_with_multiplicity(f);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_EQ(roots[0], (std::pair<Elt, int>{1, 2}));
  EXPECT_EQ(roots[1], (std::pair<Elt, int>{3, 1}));
}

TEST(BinaryForm, RootAtInfinityListedLast) {
  const Field& F = Field::get(5);
  // s t^2: roots (1:0) once and (0:1) twice.
  const BinaryForm f(F, 3, {0, 0, 1, 0});
  const auto roots = f.projective_roots();
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_EQ(roots[0].first, (std::array<Elt, 2>{0, 1}));
  EXPECT_EQ(roots[0].second, 1);
  EXPECT_EQ(roots[1].first, (std::array<Elt, 2>{1, 0}));
  EXPECT_EQ(roots[1].second, 2);
}

TEST(BinaryForm, Reducedness) {
  const Field& F = Field::get(7);
  EXPECT_TRUE(BinaryForm(F, 2, {1, 0, 1}).is_reduced());   // s^2 + t^2
  EXPECT_FALSE(BinaryForm(F, 2, {1, 2, 1}).is_reduced());  // (s + t)^2
  EXPECT_TRUE(BinaryForm(F, 2, {0, 1, 0}).is_reduced());   // s t
  EXPECT_FALSE(BinaryForm(F, 2, {0, 0, 1}).is_reduced());  // s^2 at infinity
  EXPECT_FALSE(BinaryForm(F, 3, {0, 0, 0, 0}).is_reduced());
}

TEST(BinaryForm, ReducednessMatchesExtensionRootCount) {
  // A product of two quadratics splits over F_{q^2}; reduced iff its four roots there are distinct.
  const Field& F = Field::get(5);
  const Field& E = Field::get(5, 2);
  const Embedding& e = Embedding::get(F, E);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    // Product of two quadratics; repeated iff they share a root.
    BinaryForm a(F, 2, {static_cast<Elt>(rng() % 5), static_cast<Elt>(rng() % 5), 1});
    BinaryForm b(F, 2, {static_cast<Elt>(rng() % 5), static_cast<Elt>(rng() % 5), 1});
    const BinaryForm f = a * b;
    const auto roots = f.mapped(e).projective_roots();
    bool repeated = roots.size() != 4;
    for (const auto& r : roots) repeated |= r.second > 1;
    EXPECT_EQ(f.is_reduced(), !repeated);
  }
}

TEST(HomogeneousForm, ArityError) {
  const Field& F = Field::get(5);
  const HomogeneousForm x = HomogeneousForm::variable(F, 3, 0);
  const std::vector<Elt> pt{1, 2};
  try {
    x.evaluate(pt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArityError);
  }
}

TEST(HomogeneousForm, EulerAndProductRule) {
  const Field& F = Field::get(7);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const HomogeneousForm f = random_form(F, 5, 3, rng);
    const HomogeneousForm g = random_form(F, 5, 2, rng);
    std::vector<Elt> v(5);
    for (auto& x : v) x = rng() % 7;
    // Euler: sum x_i df/dx_i = 3 f.
    Elt euler = 0;
    const auto grad = f.gradient();
    for (int i = 0; i < 5; ++i) euler = F.add(euler, F.mul(v[i], grad[i].evaluate(v)));
    EXPECT_EQ(euler, F.mul(3, f.evaluate(v)));
    EXPECT_EQ((f * g).evaluate(v), F.mul(f.evaluate(v), g.evaluate(v)));
    EXPECT_EQ((f * g).partial(2), f.partial(2) * g + f * g.partial(2));
  }
}

TEST(HomogeneousForm, SubstituteMatchesEvaluation) {
  const Field& F = Field::get(5);
  std::mt19937_64 rng(7);
  const HomogeneousForm f = random_form(F, 4, 3, rng);
  std::vector<std::vector<Elt>> A(4, std::vector<Elt>(3));
  for (auto& row : A)
    for (auto& x : row) x = rng() % 5;
  const HomogeneousForm g = f.substitute(A);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Elt> y(3), x(4, 0);
    for (auto& c : y) c = rng() % 5;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) x[i] = F.add(x[i], F.mul(A[i][j], y[j]));
    EXPECT_EQ(g.evaluate(y), f.evaluate(x));
  }
}

TEST(HomogeneousForm, GramRoundTrip) {
  const Field& F = Field::get(7);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const HomogeneousForm q = random_form(F, 4, 2, rng);
    EXPECT_EQ(quadratic_from_gram(F, gram_matrix(q)), q);
  }
}

}  // namespace
}  // namespace fanoscope
