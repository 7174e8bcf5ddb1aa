#include <gtest/gtest.h>

#include "fanoscope/error.hpp"
#include "fanoscope/field.hpp"

namespace fanoscope {
namespace {

TEST(Field, InverseOfTwoModFive) { EXPECT_EQ(Field::get(5).inv(2), 3u); }

TEST(Field, InverseOfGeneratorInF9) {
  const Field& F = Field::get(3, 2);
  // Modulus x^2 + 1, so x^{-1} = -x = 2x, whose code is 2 * 3.
  EXPECT_EQ(F.modulus(), (std::vector<std::uint32_t>{1, 0}));
  EXPECT_EQ(F.inv(3), 6u);
}

TEST(Field, QuadraticCharacter) {
  EXPECT_EQ(Field::get(5).chi(2), -1);
  EXPECT_EQ(Field::get(5).chi(4), 1);
  EXPECT_EQ(Field::get(5).chi(0), 0);
}

TEST(Field, SquareRoots) {
  EXPECT_EQ(Field::get(7).sqrt(4), std::optional<Elt>(2));
  EXPECT_EQ(Field::get(5).sqrt(3), std::nullopt);
  EXPECT_EQ(Field::get(5).sqrt(0), std::optional<Elt>(0));
}

TEST(Field, ZeroHasNoInverse) {
  try {
    Field::get(7).inv(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(Field, RejectsCharacteristicTwo) {
  try {
    Field::get(2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CharacteristicTwo);
  }
}

TEST(Field, RejectsCompositeCharacteristic) {
  EXPECT_THROW(Field::get(9), Error);
}

class FieldAxioms : public ::testing::TestWithParam<std::pair<std::uint32_t, unsigned>> {};

TEST_P(FieldAxioms, Exhaustive) {
  const auto [p, k] = GetParam();
  const Field& F = Field::get(p, k);
  const std::uint32_t q = F.size();
  for (Elt a = 0; a < q; ++a) {
    EXPECT_EQ(F.add(a, F.neg(a)), 0u);
    EXPECT_EQ(F.mul(a, 1), a);
    if (a != 0) EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
    EXPECT_EQ(F.frobenius(a, k), a);
    EXPECT_EQ(F.pow(a, q), a);
    const auto r = F.sqrt(F.square(a));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(F.square(*r), F.square(a));
    EXPECT_LE(*r, std::min<Elt>(a, F.neg(a)));
    for (Elt b = 0; b < q; ++b) {
      EXPECT_EQ(F.add(a, b), F.add(b, a));
      EXPECT_EQ(F.mul(a, b), F.mul(b, a));
      const Elt c = (a * 7 + b * 3 + 1) % q;
      EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
      EXPECT_EQ(F.add(a, F.add(b, c)), F.add(F.add(a, b), c));
      EXPECT_EQ(F.mul(a, F.mul(b, c)), F.mul(F.mul(a, b), c));
    }
  }
  // Additive structure matches the coefficient vectors.
  for (Elt a = 0; a < q; ++a) {
    EXPECT_EQ(F.from_coefficients(F.coefficients(a)), a);
    for (Elt b = 0; b < q; b += 3) {
      auto ca = F.coefficients(a), cb = F.coefficients(b);
      for (unsigned i = 0; i < k; ++i) ca[i] = (ca[i] + cb[i]) % p;
      EXPECT_EQ(F.add(a, b), F.from_coefficients(ca));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallFields, FieldAxioms,
                         ::testing::Values(std::pair{3u, 1u}, std::pair{5u, 1u}, std::pair{7u, 1u},
                                           std::pair{3u, 2u}, std::pair{5u, 2u}, std::pair{7u, 2u},
                                           std::pair{3u, 3u}));

TEST(Field, ChiMatchesSquares) {
  for (const auto& [p, k] : {std::pair{5u, 1u}, std::pair{3u, 2u}, std::pair{7u, 2u}}) {
    const Field& F = Field::get(p, k);
    std::vector<bool> is_square(F.size(), false);
    for (Elt a = 0; a < F.size(); ++a) is_square[F.square(a)] = true;
    for (Elt a = 1; a < F.size(); ++a) EXPECT_EQ(F.chi(a) == 1, is_square[a]);
  }
}

TEST(Embedding, IsRingHomomorphism) {
  for (const auto& [p, a, b] : {std::tuple{3u, 1u, 2u}, std::tuple{5u, 1u, 2u}, std::tuple{3u, 2u, 4u},
                                std::tuple{5u, 2u, 4u}, std::tuple{3u, 1u, 3u}}) {
    const Field& S = Field::get(p, a);
    const Field& T = Field::get(p, b);
    const Embedding& e = Embedding::get(S, T);
    for (Elt x = 0; x < S.size(); ++x) {
      EXPECT_EQ(e.restrict(e(x)), std::optional<Elt>(x));
      for (Elt y = 0; y < S.size(); ++y) {
        EXPECT_EQ(e(S.add(x, y)), T.add(e(x), e(y)));
        EXPECT_EQ(e(S.mul(x, y)), T.mul(e(x), e(y)));
      }
    }
    // The image is exactly the fixed field of Frobenius^a.
    std::size_t fixed = 0;
    for (Elt y = 0; y < T.size(); ++y) {
      const bool in_image = e.restrict(y).has_value();
      EXPECT_EQ(in_image, T.frobenius(y, a) == y);
      fixed += in_image;
    }
    EXPECT_EQ(fixed, S.size());
  }
}

TEST(Field, PrimalityHelper) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(101));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
}

}  // namespace
}  // namespace fanoscope
