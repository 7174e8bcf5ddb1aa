#include <gtest/gtest.h>

#include <map>

#include "fanoscope/error.hpp"
#include "fanoscope/fano.hpp"
#include "fanoscope/fourfold.hpp"

namespace fanoscope {
namespace {

NormalizedFourfold general(std::uint32_t p, std::uint64_t seed) {
  Rng rng(seed);
  return sample_general_fourfold(Field::get(p), rng);
}

HomogeneousForm quadric(const Field& F, std::initializer_list<std::pair<std::array<int, 2>, int>> terms) {
  HomogeneousForm q(F, 6, 2);
  for (const auto& [ij, c] : terms) {
    Exponent e{};
    e[ij[0]] += 1;
    e[ij[1]] += 1;
    q.add_term(e, F.from_int(c));
  }
  return q;
}

bool singular_on(const HomogeneousForm& f, const Vec& x) {
  if (f.evaluate(x) != 0) return false;
  for (const auto& g : f.gradient())
    if (g.evaluate(x) != 0) return false;
  return true;
}

TEST(NormalizeFourfold, ReconstructionAndPlane) {
  const Field& F = Field::get(5);
  const NormalizedFourfold base = general(5, 1);
  // Move P to the plane spanned by the rows below, then normalize back.
  const Mat rows{{1, 0, 2, 0, 0, 1}, {0, 1, 0, 3, 0, 0}, {0, 0, 0, 0, 1, 4}};
  // Columns: e2, e3, e5 for the complement, then the plane rows.
  Mat B(6, Vec(6, 0));
  B[2][0] = B[3][1] = B[5][2] = 1;
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 6; ++i) B[i][3 + r] = rows[r][i];
  const HomogeneousForm moved = base.f.substitute(inverse(F, B));
  const NormalizedFourfold nx = normalize_fourfold(moved, make_subspace(F, rows));
  EXPECT_EQ(nx.f, moved.substitute(nx.change));
  EXPECT_EQ(nx.f, base.f);
  HomogeneousForm sum(F, 6, 3);
  for (int i = 0; i < 3; ++i) sum = sum + HomogeneousForm::variable(F, 6, i) * nx.Q[i];
  EXPECT_EQ(sum, nx.f);
  for (const auto& r : rows) EXPECT_EQ(moved.evaluate(r), 0);
  const Mat other{{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}};
  EXPECT_THROW(
      {
        try {
          normalize_fourfold(moved, make_subspace(F, other));
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::NotContained);
          throw;
        }
      },
      Error);
}

class FourfoldTest : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(FourfoldTest, DiscriminantIsHomogeneousSextic) {
  const NormalizedFourfold nx = general(GetParam(), 2);
  const Field& F = nx.F();
  const PlaneDiscriminant pd = plane_discriminant(nx, 1);
  EXPECT_EQ(pd.delta.degree(), 6);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vec v{rng.element(F), rng.element(F), rng.element(F)};
    const Elt l = rng.nonzero(F);
    const Vec w{F.mul(l, v[0]), F.mul(l, v[1]), F.mul(l, v[2])};
    EXPECT_EQ(pd.delta.evaluate(w), F.mul(F.pow(l, 6), pd.delta.evaluate(v)));
  }
}

TEST_P(FourfoldTest, DiscriminantVanishesExactlyAtRankDrop) {
  const NormalizedFourfold nx = general(GetParam(), 3);
  const Field& F = nx.F();
  const HomogeneousForm delta = plane_discriminant(nx, 0).delta;
  int zeros = 0;
  for_each_point(F, 2, [&](const Point& s) {
    const bool vanishes = delta.evaluate(s.vec()) == 0;
    zeros += vanishes;
    EXPECT_EQ(vanishes, rank(F, fourfold_fiber_matrix(nx, s.vec())) <= 3) << to_string(s);
  });
  EXPECT_GT(zeros, 0);
}

TEST_P(FourfoldTest, SliceCompatibility) {
  const NormalizedFourfold nx = general(GetParam(), 4);
  const Field& F = nx.F();
  const HomogeneousForm delta = plane_discriminant(nx, 0).delta;
  Rng rng(11);
  const auto duals = enumerate_points(F, 2);
  for (int i = 0; i < 20; ++i) {
    const Point a = duals[rng.below(duals.size())];
    const Slice s = make_slice(nx, a);
    EXPECT_TRUE(restrict_discriminant(nx, delta, a).projectively_equal(discriminant(s.nf))) << to_string(a);
  }
}

TEST_P(FourfoldTest, TangencyFibersAreZOfTheSlice) {
  const NormalizedFourfold nx = general(GetParam(), 5);
  const Field& F = nx.F();
  int total = 0, duals = 0;
  for_each_point(F, 2, [&](const Point& a) {
    const Slice s = make_slice(nx, a);
    const SingularLocusZ Z = compute_Z(s.nf);
    EXPECT_EQ(Z.total_length(), 4);
    total += Z.total_length();
    ++duals;
    for (const Point& z : z_points_over(s.nf, F)) EXPECT_EQ(tangency_map(nx, slice_to_ambient(s, z.vec())), a);
  });
  EXPECT_EQ(total, 4 * duals);
  // Rational points of P, each in exactly one fiber.
  std::map<Point, int> fiber;
  for_each_point(F, 2, [&](const Point& p) { ++fiber[tangency_map(nx, Vec{0, 0, 0, p[0], p[1], p[2]})]; });
  for (const auto& [a, n] : fiber) EXPECT_EQ(static_cast<std::size_t>(n), z_points_over(make_slice(nx, a).nf, F).size());
}

TEST_P(FourfoldTest, UniqueSingularHyperplaneThroughP) {
  const NormalizedFourfold nx = general(GetParam(), 6);
  const Field& F = nx.F();
  const auto duals = enumerate_points(F, 2);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const Vec x{0, 0, 0, rng.element(F), rng.element(F), rng.nonzero(F)};
    int singular = 0;
    for (const Point& a : duals) {
      const Slice s = make_slice(nx, a);
      if (singular_on(s.nf.f, ambient_to_slice(s, x))) {
        ++singular;
        EXPECT_EQ(a, tangency_map(nx, x));
      }
    }
    EXPECT_EQ(singular, 1);
  }
}

TEST_P(FourfoldTest, FibrationLaw) {
  if (GetParam() > 5) GTEST_SKIP() << "global line enumeration is bounded to q <= 5";
  const NormalizedFourfold nx = general(GetParam(), 7);
  const Field& F = nx.F();
  std::map<Point, std::int64_t> fiber;
  int in_plane = 0;
  for (const Line& L : fourfold_lines(nx)) {
    const PiValue v = pi_of_line(nx, L);
    if (v.indeterminate) {
      ++in_plane;
      EXPECT_FALSE(v.value);
      // Each fiber closure in the pencil has a node of its slice on L.
      for (const Point& x : points_of_line(F, L)) {
        const Point a = tangency_map(nx, x.vec());
        EXPECT_TRUE(std::binary_search(v.pencil.begin(), v.pencil.end(), a));
        const Slice s = make_slice(nx, a);
        const auto zs = z_points_over(s.nf, F);
        EXPECT_TRUE(std::binary_search(zs.begin(), zs.end(), make_point(F, ambient_to_slice(s, x.vec()))));
      }
      continue;
    }
    ASSERT_TRUE(v.value);
    const Slice s = make_slice(nx, *v.value);
    const Line Ls = make_line(F, ambient_to_slice(s, L.row(0)), ambient_to_slice(s, L.row(1)));
    EXPECT_TRUE(vanishes_on_line(s.nf.f, Ls));
    if (v.meet) {
      const auto zs = z_points_over(s.nf, F);
      EXPECT_TRUE(std::binary_search(zs.begin(), zs.end(), make_point(F, ambient_to_slice(s, v.meet->vec()))));
    }
    ++fiber[*v.value];
  }
  EXPECT_EQ(static_cast<std::uint64_t>(in_plane), line_count(F.size(), 2));
  // Over a general slice the fiber of pi is T minus the nodes.
  const HomogeneousForm delta = plane_discriminant(nx, 0).delta;
  int checked = 0;
  for_each_point(F, 2, [&](const Point& a) {
    if (!restrict_discriminant(nx, delta, a).is_reduced()) return;
    const Slice s = make_slice(nx, a);
    if (!certify_generality(s.nf, 1).general()) return;
    const FanoModel m(s.nf, F);
    const auto T = m.torsor_points();
    const auto nodes = std::count_if(T.begin(), T.end(), [](const TPoint& t) { return t.kind == TKind::Z; });
    EXPECT_EQ(fiber[a], static_cast<std::int64_t>(T.size()) - nodes) << to_string(a);
    ++checked;
  });
  EXPECT_GT(checked, 0);
}

TEST_P(FourfoldTest, TransverseSlicesCountTorsorPoints) {
  const NormalizedFourfold nx = general(GetParam(), 8);
  const auto duals = enumerate_points(nx.F(), 2);
  const auto reports = fiber_scan(nx, std::vector<Point>(duals.begin(), duals.begin() + 12));
  int transverse = 0;
  for (const auto& r : reports) {
    if (!r.transverse) {
      EXPECT_FALSE(r.degeneration.empty());
      EXPECT_EQ(r.torsor_count, -1);
      EXPECT_FALSE(r.equal);
      continue;
    }
    ++transverse;
    EXPECT_TRUE(r.cert.general()) << r.error;
    EXPECT_TRUE(r.equal) << to_string(r.dual);
    EXPECT_EQ(r.torsor_count, r.zeta.h);
  }
  EXPECT_GT(transverse, 0);
}

INSTANTIATE_TEST_SUITE_P(Primes, FourfoldTest, ::testing::Values(3u, 5u, 7u));

TEST(FourfoldDiscriminant, ZeroWhenEveryFiberIsSingular) {
  const Field& F = Field::get(5);
  // No x5 anywhere: every fiber quadric is a cone.
  const NormalizedFourfold nx = fourfold_from_quadrics(quadric(F, {{{0, 3}, 1}, {{4, 4}, 1}}), quadric(F, {{{1, 4}, 1}, {{3, 3}, 2}}),
                                                       quadric(F, {{{2, 2}, 1}, {{3, 4}, 1}}));
  EXPECT_THROW(plane_discriminant(nx), Error);
  EXPECT_FALSE(certify_fourfold(nx).general());
}

TEST(Tangency, SingularPointOfPIsRejected) {
  const Field& F = Field::get(5);
  Rng rng(9);
  NormalizedFourfold nx = random_fourfold(F, rng);
  // Drop x3^2 from every Q_i: X becomes singular at e3.
  for (auto& q : nx.Q) q.add_term(make_exponent({0, 0, 0, 2, 0, 0}), F.neg(q.coefficient(make_exponent({0, 0, 0, 2, 0, 0}))));
  nx = fourfold_from_quadrics(nx.Q[0], nx.Q[1], nx.Q[2]);
  try {
    tangency_map(nx, Vec{0, 0, 0, 1, 0, 0});
    FAIL() << "expected SingularFourfold";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularFourfold);
  }
  EXPECT_FALSE(certify_fourfold(nx, 1, 0).smooth);
  EXPECT_THROW(tangency_map(nx, Vec{1, 0, 0, 0, 0, 0}), Error);
}

TEST(Smoothness, StructuredScanMatchesExhaustiveGradient) {
  const Field& F = Field::get(3);
  Rng rng(21);
  int singular = 0;
  for (int i = 0; i < 40; ++i) {
    const NormalizedFourfold nx = random_fourfold(F, rng);
    bool brute = false;
    for_each_point(F, 5, [&](const Point& p) { brute = brute || singular_on(nx.f, p.vec()); });
    EXPECT_EQ(certify_fourfold(nx, 1, 0).smooth, !brute);
    singular += brute;
  }
  EXPECT_GT(singular, 0);
}

TEST(Pi, DisjointLineProjects) {
  const NormalizedFourfold nx = general(3, 12);
  const Field& F = nx.F();
  int seen = 0;
  for (const Line& L : fourfold_lines(nx)) {
    const Vec a = L.row(0), b = L.row(1);
    if (rank(F, Mat{{a[0], a[1], a[2]}, {b[0], b[1], b[2]}}) != 2) continue;
    const PiValue v = pi_of_line(nx, L);
    ASSERT_TRUE(v.value);
    EXPECT_FALSE(v.meet);
    for (const Vec& r : {a, b}) EXPECT_EQ(dot(F, v.value->vec(), Vec{r[0], r[1], r[2]}), 0);
    ++seen;
  }
  EXPECT_GT(seen, 0);
}

TEST(Pi, LineInPlaneCarriesConicPencil) {
  const NormalizedFourfold nx = general(5, 13);
  const Field& F = nx.F();
  const Line L = make_line(F, {0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 2});
  const PiValue v = pi_of_line(nx, L);
  EXPECT_TRUE(v.indeterminate);
  EXPECT_EQ(v.pencil_degree, 2u);
  EXPECT_GE(v.pencil.size(), 3u);
  EXPECT_LE(v.pencil.size(), points_of_line(F, L).size());
}

TEST(Pi, RejectsLineOffX) {
  const NormalizedFourfold nx = general(5, 14);
  const Field& F = nx.F();
  for (const Line& L : enumerate_lines(F, 5)) {
    if (vanishes_on_line(nx.f, L)) continue;
    EXPECT_THROW(pi_of_line(nx, L), Error);
    break;
  }
}

TEST(FiberScan, ThreadsDoNotChangeReports) {
  const NormalizedFourfold nx = general(3, 15);
  const auto duals = enumerate_points(nx.F(), 2);
  FiberScanOptions one;
  FiberScanOptions many;
  many.threads = 3;
  EXPECT_EQ(fiber_scan_csv(fiber_scan(nx, duals, one)), fiber_scan_csv(fiber_scan(nx, duals, many)));
}

TEST(FiberScan, ExtensionCountsAndAxioms) {
  const NormalizedFourfold nx = general(3, 16);
  FiberScanOptions opt;
  opt.extension_count = true;
  opt.axiom_trials = 20;
  int verified = 0;
  for (const auto& r : fiber_scan(nx, enumerate_points(nx.F(), 2), opt)) {
    if (!r.transverse) continue;
    EXPECT_TRUE(r.equal) << to_string(r.dual) << " " << r.error;
    EXPECT_EQ(r.torsor_count2, r.zeta.h2);
    if (r.axioms) {
      EXPECT_TRUE(r.axioms->pass());
      ++verified;
    }
  }
  EXPECT_GT(verified, 0);
}

TEST(FiberScan, CsvShape) {
  const NormalizedFourfold nx = general(3, 17);
  const auto reports = fiber_scan(nx, enumerate_points(nx.F(), 2));
  const std::string csv = fiber_scan_csv(reports);
  EXPECT_EQ(csv.rfind("dual,transverse,N1,N2,h,T,equal\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), reports.size() + 1);
}

}  // namespace
}  // namespace fanoscope
