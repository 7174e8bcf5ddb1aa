#include <gtest/gtest.h>

#include <set>

#include "fanoscope/error.hpp"
#include "fanoscope/pencil.hpp"
#include "fanoscope/sampling.hpp"

namespace fanoscope {
namespace {

HomogeneousForm x(const Field& F, int i) { return HomogeneousForm::variable(F, 5, i); }

HomogeneousForm sq(const Field& F, int i, long long a) { return (x(F, i) * x(F, i)).scaled(F.from_int(a)); }

TEST(FiberIndexing, RoundTrip) {
  const Field& K = Field::get(3, 2);
  EXPECT_EQ(fiber_count(K), 10u);
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const auto [s, t] = fiber_param(K, i);
    EXPECT_EQ(fiber_index(K, s, t), i);
    EXPECT_EQ(fiber_index(K, K.mul(s, 5), K.mul(t, 5)), i);
  }
  EXPECT_EQ(fiber_param(K, 9), (std::array<Elt, 2>{0, 1}));
}

TEST(FiberIndexing, AmbientRoundTrip) {
  const Field& K = Field::get(7);
  const Vec v{3, 1, 4, 1};
  const Vec a = fiber_to_ambient(K, 2, 5, v);
  EXPECT_EQ(a, (Vec{6, 1, 1, 4, 1}));
  EXPECT_EQ(ambient_to_fiber(K, 2, 5, a), v);
  EXPECT_EQ(fiber_of_point(K, a), fiber_index(K, 2, 5));
}

TEST(Discriminant, MatchesFiberDeterminants) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const Field& F = Field::get(p);
    Rng rng(100 + p);
    for (int trial = 0; trial < 10; ++trial) {
      const NormalizedThreefold nf = random_threefold(F, rng);
      const BinaryForm d = discriminant(nf);
      EXPECT_EQ(d.degree(), 6);
      for (FiberIndex i = 0; i < fiber_count(F); ++i) {
        const auto [s, t] = fiber_param(F, i);
        EXPECT_EQ(d.evaluate(s, t), determinant(F, fiber_matrix(nf, s, t)));
      }
    }
  }
}

TEST(Discriminant, FiberMatrixIsGramOfResidualQuadric) {
  // R(u, x) = s Q0(su, tu, x) + t Q1(su, tu, x) evaluated pointwise.
  const Field& F = Field::get(5);
  Rng rng(7);
  const NormalizedThreefold nf = random_threefold(F, rng);
  for (FiberIndex i = 0; i < fiber_count(F); ++i) {
    const auto [s, t] = fiber_param(F, i);
    const Mat M = fiber_matrix(nf, s, t);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec v{rng.element(F), rng.element(F), rng.element(F), rng.element(F)};
      const Vec a = fiber_to_ambient(F, s, t, v);
      const Elt R = F.add(F.mul(s, nf.Q0.evaluate(a)), F.mul(t, nf.Q1.evaluate(a)));
      EXPECT_EQ(dot(F, v, apply(F, M, v)), R);
    }
  }
}

TEST(Discriminant, DiagonalPencil) {
  // R = (s^3 + t^3) u^2 + sum (s a_i + t b_i) x_i^2.
  const Field& F = Field::get(7);
  const HomogeneousForm Q0 = sq(F, 0, 1) + sq(F, 2, 1) + sq(F, 3, 2) + sq(F, 4, 3);
  const HomogeneousForm Q1 = sq(F, 1, 1) + sq(F, 2, 1) + sq(F, 3, 5) + sq(F, 4, 6);
  const BinaryForm d = discriminant(from_quadrics(Q0, Q1));
  const BinaryForm cubic(F, 3, {1, 0, 0, 1});
  const BinaryForm expected = cubic * BinaryForm(F, 1, {1, 1}) * BinaryForm(F, 1, {2, 5}) * BinaryForm(F, 1, {3, 6});
  EXPECT_TRUE(d.projectively_equal(expected));
}

TEST(Fiber, RanksAndClassCounts) {
  const Field& F = Field::get(5);
  Rng rng(17);
  const GeneralSample s = sample_general_threefold(F, rng, false, 1);
  const BinaryForm d = discriminant(s.nf);
  for (FiberIndex i = 0; i < fiber_count(F); ++i) {
    const Fiber fib = make_fiber(s.nf, i);
    const auto [a, b] = fiber_param(F, i);
    EXPECT_EQ(fib.rank, d.evaluate(a, b) == 0 ? 3 : 4);
    EXPECT_EQ(fib.num_classes(), 1 + F.chi(d.evaluate(a, b)));
    EXPECT_EQ(fib.vertex.has_value(), fib.rank == 3);
    for (std::size_t c = 0; c < fib.reps.size(); ++c) EXPECT_EQ(class_of_line(F, fib, fib.reps[c]), static_cast<int>(c));
  }
}

TEST(Fiber, RulingsPartitionAllLines) {
  // A smooth split quadric surface over F_q carries 2 (q + 1) lines in two
  // classes, a cone q + 1 lines, a non-split quadric none.
  const Field& F = Field::get(5);
  Rng rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    const GeneralSample s = sample_general_threefold(F, rng, false, 1);
    for (FiberIndex i = 0; i < fiber_count(F); ++i) {
      const Fiber fib = make_fiber(s.nf, i);
      const auto classes = rulings_of_fiber(s.nf, i);
      ASSERT_EQ(static_cast<int>(classes.size()), fib.num_classes());
      for (std::size_t c = 0; c < classes.size(); ++c) {
        EXPECT_EQ(classes[c].size(), 6u);
        std::set<int> labels;
        for (const Line& L : classes[c]) labels.insert(class_of_line(F, fib, L));
        EXPECT_EQ(labels.size(), 1u);
      }
      if (classes.size() == 2) {
        EXPECT_NE(class_of_line(F, fib, classes[0][0]), class_of_line(F, fib, classes[1][0]));
      }
    }
  }
}

TEST(Fiber, SplitQuadricSurface) {
  // Residual quadric u^2 + x2^2 - x3^2 - x4^2 on the fiber (1:0).
  const Field& F = Field::get(5);
  const HomogeneousForm Q0 = sq(F, 0, 1) + sq(F, 2, 1) + sq(F, 3, -1) + sq(F, 4, -1);
  const HomogeneousForm Q1 = sq(F, 1, 1) + sq(F, 2, 2) + x(F, 3) * x(F, 4);
  const NormalizedThreefold nf = from_quadrics(Q0, Q1);
  const FiberIndex i = fiber_index(F, 1, 0);
  const auto classes = rulings_of_fiber(nf, i);
  ASSERT_EQ(classes.size(), 2u);
  EXPECT_EQ(classes[0].size(), 6u);
  EXPECT_EQ(classes[1].size(), 6u);
  EXPECT_EQ(make_fiber(nf, i).chi, 1);
}

TEST(Fiber, LineOffFiberRejected) {
  const Field& F = Field::get(5);
  Rng rng(29);
  const GeneralSample s = sample_general_threefold(F, rng, false, 1);
  const Fiber fib = make_fiber(s.nf, 0);
  const Line L = make_line(F, {1, 1, 0, 0, 0}, {0, 0, 1, 0, 0});
  try {
    class_of_line(F, fib, L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Curve, FormulaCountMatchesNaive) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const Field& F = Field::get(p);
    Rng rng(p * 11);
    for (int trial = 0; trial < 20; ++trial) {
      BinaryForm d(F, 6);
      for (int i = 0; i <= 6; ++i) d.set_coeff(i, rng.element(F));
      if (d.is_zero()) continue;
      for (unsigned k = 1; k <= 2; ++k) EXPECT_EQ(count_points_C({d}, k), count_points_C_naive({d}, k));
    }
  }
}

TEST(Curve, WeilBoundsOnRandomSextics) {
  const Field& F = Field::get(7);
  Rng rng(77);
  int tested = 0;
  while (tested < 100) {
    BinaryForm d(F, 6);
    for (int i = 0; i <= 6; ++i) d.set_coeff(i, rng.element(F));
    if (d.is_zero() || !d.is_reduced()) continue;
    ++tested;
    const ZetaData z = zeta({d});
    EXPECT_LE(z.c1 * z.c1, 16 * z.q);
    EXPECT_GT(z.h, 0);
    EXPECT_EQ(z.h, class_number_by_effective_divisors({d}));
  }
}

TEST(Curve, ClassNumberOverQuadraticExtension) {
  for (std::uint32_t p : {3u, 5u}) {
    const Field& F = Field::get(p);
    const Field& K = Field::get(p, 2);
    Rng rng(p * 13);
    for (int trial = 0; trial < 10; ++trial) {
      BinaryForm d(F, 6);
      for (int i = 0; i <= 6; ++i) d.set_coeff(i, rng.element(F));
      if (d.is_zero() || !d.is_reduced()) continue;
      const HyperellipticModel CK{d.mapped(Embedding::get(F, K))};
      EXPECT_EQ(zeta({d}).h2, class_number_by_effective_divisors(CK));
    }
  }
}

TEST(Curve, RejectsImpossibleCounts) {
  try {
    zeta_from_counts(5, 30, 26);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InternalInconsistency);
  }
}

TEST(Curve, SupersingularExample) {
  // y^2 = x^5 - x over F_5: five affine points with y = 0 plus one at infinity.
  const Field& F = Field::get(5);
  const BinaryForm d(F, 6, {0, 1, 0, 0, 0, F.from_int(-1), 0});
  const ZetaData z = zeta({d});
  EXPECT_EQ(z.N1, 6);
  EXPECT_EQ(z.c1, 0);
  EXPECT_EQ(z.h, class_number_by_effective_divisors({d}));
}

TEST(Models, OperationalCurveMatchesHyperelliptic) {
  for (std::uint32_t p : {3u, 5u}) {
    const Field& F = Field::get(p);
    Rng rng(p * 101);
    for (int trial = 0; trial < 3; ++trial) {
      const GeneralSample s = sample_general_threefold(F, rng, false, 1);
      const HyperellipticModel C{discriminant(s.nf)};
      EXPECT_TRUE(match_models(s.nf, C));
      EXPECT_EQ(static_cast<std::int64_t>(operational_curve(s.nf).points.size()), count_points_C(C, 1));
    }
  }
}

TEST(Models, TwistedCurveDoesNotMatch) {
  const Field& F = Field::get(5);
  Rng rng(303);
  Elt nonsquare = 1;
  while (F.chi(nonsquare) != -1) ++nonsquare;
  int checked = 0;
  while (checked < 3) {
    const GeneralSample s = sample_general_threefold(F, rng, false, 1);
    const BinaryForm d = discriminant(s.nf);
    if (count_points_C({d}, 1) == F.size() + 1) continue;
    ++checked;
    EXPECT_FALSE(match_models(s.nf, {d.scaled(nonsquare)}));
  }
}

}  // namespace
}  // namespace fanoscope
