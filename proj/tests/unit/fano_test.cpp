#include <gtest/gtest.h>

#include <set>

#include "fanoscope/error.hpp"
#include "fanoscope/fano.hpp"
#include "fanoscope/sampling.hpp"

namespace fanoscope {
namespace {

const Subspace& plane_P(const Field& F) {
  static std::map<const Field*, Subspace> cache;
  auto it = cache.find(&F);
  if (it == cache.end()) {
    it = cache.emplace(&F, make_subspace(F, {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}})).first;
  }
  return it->second;
}

std::vector<Line> lines_of(const std::vector<ClassifiedLine>& cl) {
  std::vector<Line> out;
  for (const auto& c : cl) out.push_back(c.line);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Enumeration, MatchesBruteForce) {
  for (std::uint32_t p : {3u, 5u}) {
    const Field& F = Field::get(p);
    Rng rng(p);
    for (int trial = 0; trial < 2; ++trial) {
      const GeneralSample s = sample_general_threefold(F, rng, false, 1);
      EXPECT_EQ(lines_of(enumerate_fano(s.nf, 1)), enumerate_fano_brute_force(s.nf, 1));
    }
  }
}

TEST(Enumeration, MatchesBruteForceOverQuadraticExtension) {
  const Field& F = Field::get(3);
  Rng rng(33);
  const GeneralSample s = sample_general_threefold(F, rng, false, 1);
  EXPECT_EQ(lines_of(enumerate_fano(s.nf, 2)), enumerate_fano_brute_force(s.nf, 2));
}

TEST(Enumeration, TagsArePartition) {
  const Field& F = Field::get(5);
  Rng rng(5);
  const GeneralSample s = sample_general_threefold(F, rng, false, 1);
  const auto lines = enumerate_fano(s.nf, 1);
  std::size_t in_plane = 0;
  for (const auto& c : lines) {
    const bool P = contains(F, plane_P(F), c.line);
    switch (c.tag) {
      case LineTag::InPlane:
        EXPECT_TRUE(P);
        ++in_plane;
        break;
      case LineTag::MeetsPlaneOnce:
        ASSERT_TRUE(c.meet && c.ruling);
        EXPECT_TRUE(contains(F, c.line, c.meet->vec()));
        EXPECT_EQ(c.meet->vec()[0], 0u);
        EXPECT_EQ(c.meet->vec()[1], 0u);
        break;
      case LineTag::DisjointFromPlane:
        for (const Point& x : points_of_line(F, c.line)) EXPECT_FALSE(x[0] == 0 && x[1] == 0);
        break;
    }
  }
  EXPECT_EQ(in_plane, 31u);
  const auto all = lines_of(lines);
  const std::set<Line> unique(all.begin(), all.end());
  EXPECT_EQ(unique.size(), lines.size());
}

TEST(Enumeration, CountInvariantUnderCoordinateChange) {
  const Field& F = Field::get(5);
  Rng rng(55);
  for (int trial = 0; trial < 3; ++trial) {
    const GeneralSample s = sample_general_threefold(F, rng, false, 1);
    Mat g;
    do {
      g.assign(5, Vec(5));
      for (auto& row : g)
        for (auto& v : row) v = rng.element(F);
    } while (rank(F, g) < 5);
    // f2(x) = f(g x) contains the plane g^{-1} P.
    const HomogeneousForm f2 = s.nf.f.substitute(g);
    const Mat gi = inverse(F, g);
    Mat rows(3, Vec(5));
    for (int r = 0; r < 3; ++r)
      for (int i = 0; i < 5; ++i) rows[r][i] = gi[i][r + 2];
    const NormalizedThreefold nf2 = normalize(f2, make_subspace(F, rows));
    const auto a = enumerate_fano(s.nf, 1), b = enumerate_fano(nf2, 1);
    EXPECT_EQ(a.size(), b.size());
    for (LineTag t : {LineTag::InPlane, LineTag::MeetsPlaneOnce, LineTag::DisjointFromPlane}) {
      auto count = [t](const std::vector<ClassifiedLine>& v) {
        return std::count_if(v.begin(), v.end(), [t](const ClassifiedLine& c) { return c.tag == t; });
      };
      EXPECT_EQ(count(a), count(b)) << to_string(t);
    }
  }
}

class ModelTest : public ::testing::TestWithParam<std::uint32_t> {
 protected:
  void SetUp() override {
    const Field& F = Field::get(GetParam());
    Rng rng(1000 + GetParam());
    // Prefer a sample with a rational node so every section is exercised.
    do {
      sample_ = std::make_unique<GeneralSample>(sample_general_threefold(F, rng, true, 1));
      model_ = std::make_unique<FanoModel>(sample_->nf, F);
    } while (model_->z_points().empty());
  }
  std::unique_ptr<GeneralSample> sample_;
  std::unique_ptr<FanoModel> model_;
};

TEST_P(ModelTest, TauLinesAreEnumerated) {
  const FanoModel& m = *model_;
  const auto lines = lines_of(enumerate_fano(sample_->nf, 1));
  for (const Point& z : m.z_points()) {
    for (const RulingPoint& c : m.curve_points()) {
      const Line L = m.tau(z, c);
      EXPECT_TRUE(std::binary_search(lines.begin(), lines.end(), L));
      EXPECT_TRUE(contains(m.K(), L, z.vec()));
      const ClassifiedLine cl = m.classify(L);
      if (cl.tag == LineTag::MeetsPlaneOnce) EXPECT_EQ(*cl.ruling, c);
    }
  }
}

TEST_P(ModelTest, TauThroughZPerFiber) {
  const FanoModel& m = *model_;
  for (const Point& z : m.z_points()) {
    for (FiberIndex i = 0; i < fiber_count(m.K()); ++i) {
      const Fiber& fib = m.fiber(i);
      const auto through = fiber_lines_through(m.K(), fib, z.vec());
      if (fib.rank == 3) {
        EXPECT_EQ(through.size(), 1u);
        ASSERT_TRUE(fib.vertex.has_value());
        const auto [s, t] = fib.param;
        EXPECT_TRUE(contains(m.K(), through[0], fiber_to_ambient(m.K(), s, t, *fib.vertex)));
      } else {
        EXPECT_EQ(through.size(), static_cast<std::size_t>(fib.num_classes()));
      }
    }
  }
}

TEST_P(ModelTest, ConjugatePairSpansTangentPlaneResidualInP) {
  const FanoModel& m = *model_;
  for (const Point& z : m.z_points()) {
    for (const RulingPoint& c : m.curve_points()) {
      const RulingPoint cb = m.conjugate(c);
      if (cb == c) continue;
      const Line a = m.tau(z, c), b = m.tau(z, cb);
      const Residual r = residual_line(m.threefold().f, span(m.K(), a, b), a, b);
      EXPECT_TRUE(contains(m.K(), plane_P(m.K()), r.line)) << to_string(r.line);
      EXPECT_TRUE(contains(m.K(), r.line, z.vec()));
    }
  }
}

TEST_P(ModelTest, SigmaIsUniqueMeetingLine) {
  const FanoModel& m = *model_;
  const auto U = disjoint_lines(m.threefold());
  std::map<FiberIndex, std::vector<std::vector<Line>>> rulings;
  for (const RulingPoint& c : m.curve_points()) {
    if (!rulings.count(c.fiber)) rulings[c.fiber] = rulings_of_fiber(m.threefold(), c.fiber);
  }
  for (std::size_t i = 0; i < U.size() && i < 6; ++i) {
    for (const RulingPoint& c : m.curve_points()) {
      const Line M = m.sigma(U[i], c);
      EXPECT_NE(M, U[i]);
      int meeting = 0;
      for (const auto& cls : rulings[c.fiber]) {
        for (const Line& N : cls) {
          if (class_of_line(m.K(), m.fiber(c.fiber), N) == c.cls) meeting += line_meets(m.K(), N, U[i]);
        }
      }
      EXPECT_EQ(meeting, 1);
      EXPECT_TRUE(line_meets(m.K(), M, U[i]));
    }
  }
}

TEST_P(ModelTest, PhiLinesPassThroughZAndPhiIsInjective) {
  const FanoModel& m = *model_;
  const auto U = disjoint_lines(m.threefold());
  for (const Point& z : m.z_points()) {
    std::set<std::array<RulingPoint, 2>> pairs_split;
    std::set<std::array<Line, 2>> images;
    for (const Line& L : U) {
      const PhiResult ph = m.phi(z, L);
      const Embedding& e = Embedding::get(m.K(), *ph.field);
      for (const Line& M : ph.lines) {
        EXPECT_TRUE(contains(*ph.field, M, map_point(e, z).vec()));
        EXPECT_TRUE(line_meets(*ph.field, M, map_line(e, L)));
      }
      EXPECT_TRUE(images.insert(ph.lines).second);
    }
  }
}

TEST_P(ModelTest, PsiIsSymmetricAndConjugatePairsLandInPencil) {
  const FanoModel& m = *model_;
  const auto& C = m.curve_points();
  for (const Point& z : m.z_points()) {
    for (std::size_t a = 0; a < C.size(); ++a) {
      for (std::size_t b = a; b < C.size() && b < a + 5; ++b) {
        const auto l1 = m.psi(z, C[a], C[b]), l2 = m.psi(z, C[b], C[a]);
        EXPECT_EQ(l1, l2);
      }
      const auto l = m.psi(z, C[a], m.conjugate(C[a]));
      if (l) {
        EXPECT_TRUE(contains(m.K(), plane_P(m.K()), *l));
        EXPECT_TRUE(contains(m.K(), *l, z.vec()));
      }
    }
  }
}

TEST_P(ModelTest, DecompositionLaws) {
  const FanoDecomposition d = decompose(*model_);
  for (const auto& c : d.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.witness;
  EXPECT_LE(d.f_cap_pstar, 6u);
}

TEST_P(ModelTest, DecompositionLawsOverQuadraticExtension) {
  const FanoDecomposition d = decompose(model_->extension());
  for (const auto& c : d.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.witness;
}

TEST_P(ModelTest, JIsAnInvolutionOnT) {
  const FanoModel& m = *model_;
  const auto T = m.torsor_points();
  for (const RulingPoint& c : m.curve_points()) {
    for (const TPoint& x : T) {
      const TPoint y = m.j(c, x);
      EXPECT_TRUE(std::binary_search(T.begin(), T.end(), y));
      EXPECT_EQ(m.j(c, y), x);
    }
  }
}

TEST_P(ModelTest, JCaseAnalysis) {
  const FanoModel& m = *model_;
  for (const Point& z : m.z_points()) {
    for (const RulingPoint& c : m.curve_points()) {
      const TPoint zt{TKind::Z, Line{}, z};
      const Line tb = m.tau(z, m.conjugate(c));
      const TPoint img = m.j(c, zt);
      if (img.kind == TKind::Cz) {
        EXPECT_EQ(img.line, tb);
      } else {
        // tau_z(bar c) is the line joining z to another node.
        EXPECT_EQ(img.kind, TKind::Z);
        EXPECT_TRUE(contains(m.K(), tb, img.z.vec()));
      }
      for (const RulingPoint& d : m.curve_points()) {
        const Line td = m.tau(z, d);
        if (d == m.conjugate(c) || contains(m.K(), plane_P(m.K()), td)) continue;
        const TPoint r = m.j(c, {TKind::Cz, td, z});
        EXPECT_NE(r.kind, TKind::Z);
        EXPECT_FALSE(contains(m.K(), plane_P(m.K()), r.line));
      }
    }
  }
}

TEST_P(ModelTest, TorsorCountEqualsClassNumber) {
  const ZetaData z = zeta({discriminant(sample_->nf)});
  EXPECT_EQ(static_cast<std::int64_t>(model_->torsor_points().size()), z.h);
  EXPECT_EQ(static_cast<std::int64_t>(model_->extension().torsor_points().size()), z.h2);
}

INSTANTIATE_TEST_SUITE_P(SmallFields, ModelTest, ::testing::Values(3u, 5u, 7u));

TEST(TorsorCount, RandomSamples) {
  for (std::uint32_t p : {3u, 5u}) {
    const Field& F = Field::get(p);
    Rng rng(4 * p);
    for (int trial = 0; trial < 5; ++trial) {
      const GeneralSample s = sample_general_threefold(F, rng, true, 1);
      const FanoModel m(s.nf, F);
      EXPECT_EQ(static_cast<std::int64_t>(m.torsor_points().size()), zeta({discriminant(s.nf)}).h);
    }
  }
}

TEST(SurfaceLines, TwentySevenWithIncidence) {
  const Field& F = Field::get(5);
  Rng rng(27);
  int done = 0;
  while (done < 3) {
    const GeneralSample s = sample_general_threefold(F, rng, false, 1);
    const auto U = disjoint_lines(s.nf);
    for (std::size_t i = 0; i + 1 < U.size() && done < 3; ++i) {
      if (line_meets(F, U[i], U[i + 1])) continue;
      SurfaceLines sl;
      try {
        sl = surface_lines(s.nf, U[i], U[i + 1]);
      } catch (const Error&) {
        continue;
      }
      if (sl.depth == 0) continue;
      ++done;
      const Field& W = Field::get(5, sl.depth);
      ASSERT_EQ(sl.lines.size(), 27u);
      int transversals = 0;
      for (const Line& a : sl.lines) {
        int meets = 0;
        for (const Line& b : sl.lines) meets += a != b && line_meets(W, a, b);
        EXPECT_EQ(meets, 10);
        EXPECT_TRUE(vanishes_on_line(s.nf.f.mapped(Embedding::get(F, W)), a));
        transversals += a != sl.L && a != sl.M && line_meets(W, a, sl.L) && line_meets(W, a, sl.M);
      }
      EXPECT_EQ(transversals, 5);
    }
  }
}

TEST(SurfaceLines, LinesMeetingRejectsForeignLine) {
  const Field& F = Field::get(5);
  const HomogeneousForm f = HomogeneousForm::variable(F, 5, 0) * HomogeneousForm::variable(F, 5, 1) *
                            HomogeneousForm::variable(F, 5, 2);
  const Subspace S = make_subspace(F, {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}});
  EXPECT_THROW(lines_meeting(f, S, make_line(F, {0, 0, 0, 0, 1}, {1, 0, 0, 0, 0})), Error);
}

TEST(IntersectionNumbers, SampledValues) {
  const Field& F = Field::get(5);
  Rng rng(424);
  const GeneralSample s = sample_general_threefold(F, rng, true, 1);
  const IntersectionReport r = verify_intersection_numbers(s.nf, 4, rng);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.sigma_sigma.size(), 4u);
  EXPECT_EQ(r.tau_tau.size(), 4u);
}

}  // namespace
}  // namespace fanoscope
