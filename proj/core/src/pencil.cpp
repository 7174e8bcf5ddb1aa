#include "fanoscope/pencil.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fanoscope/error.hpp"

namespace fanoscope {
namespace {

Elt quad_value(const Field& K, const Mat& M, const Vec& v) {
  Elt s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    Elt row = 0;
    for (std::size_t j = 0; j < v.size(); ++j) row = K.add(row, K.mul(M[i][j], v[j]));
    s = K.add(s, K.mul(v[i], row));
  }
  return s;
}

Elt bilinear(const Field& K, const Mat& M, const Vec& a, const Vec& b) { return dot(K, a, apply(K, M, b)); }

// Solutions v3 of q(v0, v1, v2, v3) = 0 for a fixed prefix; nullopt when every
// v3 works.
std::optional<std::vector<Elt>> last_coordinate(const Field& K, const Mat& M, const Vec& prefix) {
  Vec v{prefix[0], prefix[1], prefix[2], 0};
  const Elt c = quad_value(K, M, v);
  Elt b = 0;
  for (int j = 0; j < 3; ++j) b = K.add(b, K.mul(M[j][3], v[j]));
  b = K.add(b, b);
  const Elt a = M[3][3];
  std::vector<Elt> out;
  if (a == 0) {
    if (b == 0) {
      if (c == 0) return std::nullopt;
      return out;
    }
    out.push_back(K.neg(K.div(c, b)));
    return out;
  }
  const Elt disc = K.sub(K.mul(b, b), K.mul(K.from_int(4), K.mul(a, c)));
  const auto r = K.sqrt(disc);
  if (!r) return out;
  const Elt inv2a = K.inv(K.add(a, a));
  out.push_back(K.mul(K.sub(*r, b), inv2a));
  if (*r != 0) out.push_back(K.mul(K.sub(K.neg(*r), b), inv2a));
  std::sort(out.begin(), out.end());
  return out;
}

// Visits quadric points in canonical order until fn returns true.
void scan_quadric(const Field& K, const Mat& M, const std::function<bool(const Vec&)>& fn) {
  const Elt q = K.size();
  auto emit_prefix = [&](const Vec& pre) {
    const auto sols = last_coordinate(K, M, pre);
    if (!sols) {
      for (Elt x = 0; x < q; ++x) {
        if (fn({pre[0], pre[1], pre[2], x})) return true;
      }
      return false;
    }
    for (Elt x : *sols) {
      if (fn({pre[0], pre[1], pre[2], x})) return true;
    }
    return false;
  };
  for (Elt a = 0; a < q; ++a) {
    for (Elt b = 0; b < q; ++b) {
      if (emit_prefix({1, a, b})) return;
    }
  }
  for (Elt b = 0; b < q; ++b) {
    if (emit_prefix({0, 1, b})) return;
  }
  if (emit_prefix({0, 0, 1})) return;
  if (M[3][3] == 0) fn({0, 0, 0, 1});
}

bool proportional(const Field& K, const Vec& a, const Vec& b) { return rank(K, {a, b}) < 2; }

}  // namespace

std::array<Elt, 2> fiber_param(const Field& K, FiberIndex i) {
  if (i < K.size()) return {1, static_cast<Elt>(i)};
  if (i == K.size()) return {0, 1};
  throw Error(ErrorCode::InvalidInput, "fiber index out of range");
}

FiberIndex fiber_index(const Field& K, Elt s, Elt t) {
  if (s != 0) return K.div(t, s);
  if (t == 0) throw Error(ErrorCode::Degenerate, "(0:0) is not a pencil parameter");
  return K.size();
}

std::uint32_t fiber_count(const Field& K) { return K.size() + 1; }

Vec fiber_to_ambient(const Field& K, Elt s, Elt t, const Vec& v) { return {K.mul(s, v[0]), K.mul(t, v[0]), v[1], v[2], v[3]}; }

Vec ambient_to_fiber(const Field& K, Elt s, Elt t, const Vec& x) {
  const Elt u = s != 0 ? K.div(x[0], s) : K.div(x[1], t);
  return {u, x[2], x[3], x[4]};
}

FiberIndex fiber_of_point(const Field& K, const Vec& x) { return fiber_index(K, x[0], x[1]); }

Mat PencilMatrix::evaluate(Elt s, Elt t) const {
  Mat M(4, Vec(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M[i][j] = entries[i][j].evaluate(s, t);
  return M;
}

PencilMatrix pencil_matrix(const NormalizedThreefold& nf) {
  const Field& K = nf.F();
  const Mat g = gram_matrix(nf.Q0), h = gram_matrix(nf.Q1);
  const Elt two = K.from_int(2);
  PencilMatrix P;
  P.field = &K;
  P.entries.assign(4, std::vector<BinaryForm>(4, BinaryForm(K, 1)));
  P.entries[0][0] = BinaryForm(K, 3, {g[0][0], K.add(K.mul(two, g[0][1]), h[0][0]), K.add(g[1][1], K.mul(two, h[0][1])), h[1][1]});
  for (int j = 1; j < 4; ++j) {
    const int c = j + 1;
    P.entries[0][j] = BinaryForm(K, 2, {g[0][c], K.add(g[1][c], h[0][c]), h[1][c]});
    P.entries[j][0] = P.entries[0][j];
    for (int i = 1; i < 4; ++i) P.entries[i][j] = BinaryForm(K, 1, {g[i + 1][c], h[i + 1][c]});
  }
  return P;
}

Mat fiber_matrix(const NormalizedThreefold& nf, Elt s, Elt t) {
  if (s == 0 && t == 0) throw Error(ErrorCode::Degenerate, "(0:0) is not a pencil parameter");
  return pencil_matrix(nf).evaluate(s, t);
}

BinaryForm discriminant(const NormalizedThreefold& nf) {
  const PencilMatrix P = pencil_matrix(nf);
  const Field& K = nf.F();
  BinaryForm det(K, 6);
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) inversions += perm[a] > perm[b];
    BinaryForm term = P.entries[0][perm[0]];
    for (int r = 1; r < 4; ++r) term = term * P.entries[r][perm[r]];
    det = inversions % 2 ? det - term : det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (det.is_zero()) throw Error(ErrorCode::NotGeneral, "discriminant vanishes identically");
  return det;
}

std::optional<Vec> first_quadric_point(const Field& K, const Mat& M) {
  std::optional<Vec> out;
  scan_quadric(K, M, [&](const Vec& v) {
    out = v;
    return true;
  });
  return out;
}

std::vector<Vec> quadric_points(const Field& K, const Mat& M) {
  std::vector<Vec> out;
  scan_quadric(K, M, [&](const Vec& v) {
    out.push_back(v);
    return false;
  });
  return out;
}

std::vector<std::array<Vec, 2>> quadric_lines_through(const Field& K, const Mat& M, const Vec& y) {
  const Vec w = apply(K, M, y);
  if (std::all_of(w.begin(), w.end(), [](Elt x) { return x == 0; })) {
    throw Error(ErrorCode::Degenerate, "point is singular on the quadric");
  }
  const Mat T = kernel(K, {w}, 4);
  Vec a, b;
  for (std::size_t i = 0; i < T.size() && a.empty(); ++i) {
    for (std::size_t j = i + 1; j < T.size() && a.empty(); ++j) {
      if (rank(K, {y, T[i], T[j]}) == 3) {
        a = T[i];
        b = T[j];
      }
    }
  }
  const BinaryForm beta(K, 2, {quad_value(K, M, a), K.mul(K.from_int(2), bilinear(K, M, a, b)), quad_value(K, M, b)});
  if (beta.is_zero()) throw Error(ErrorCode::Degenerate, "tangent plane lies on the quadric");
  std::vector<std::array<Vec, 2>> out;
  for (const auto& [r, m] : beta.projective_roots()) out.push_back({y, axpy(K, r[0], a, r[1], b)});
  return out;
}

Fiber make_fiber(const NormalizedThreefold& nf, FiberIndex i) {
  const Field& K = nf.F();
  Fiber fib;
  fib.param = fiber_param(K, i);
  const auto [s, t] = fib.param;
  fib.gram = fiber_matrix(nf, s, t);
  fib.rank = rank(K, fib.gram);
  if (fib.rank <= 2) throw Error(ErrorCode::NotGeneral, "fiber quadric of rank at most 2");
  fib.chi = K.chi(determinant(K, fib.gram));
  std::vector<std::array<Vec, 2>> lines;
  if (fib.rank == 4) {
    const auto y = first_quadric_point(K, fib.gram);
    if (!y) throw Error(ErrorCode::InternalInconsistency, "smooth quadric surface without rational points");
    lines = quadric_lines_through(K, fib.gram, *y);
  } else {
    fib.vertex = kernel(K, fib.gram, 4)[0];
    std::optional<Vec> y;
    scan_quadric(K, fib.gram, [&](const Vec& v) {
      if (proportional(K, v, *fib.vertex)) return false;
      y = v;
      return true;
    });
    if (!y) throw Error(ErrorCode::InternalInconsistency, "quadric cone without rational lines");
    lines = quadric_lines_through(K, fib.gram, *y);
    lines.resize(1);
  }
  for (const auto& l : lines) fib.reps.push_back(make_line(K, fiber_to_ambient(K, s, t, l[0]), fiber_to_ambient(K, s, t, l[1])));
  std::sort(fib.reps.begin(), fib.reps.end());
  return fib;
}

int class_of_line(const Field& K, const Fiber& fib, const Line& L) {
  if (fib.reps.empty()) throw Error(ErrorCode::InvalidInput, "fiber has no rational ruling class");
  const auto [s, t] = fib.param;
  for (int r = 0; r < 2; ++r) {
    const Vec x = ambient_to_fiber(K, s, t, L.row(r));
    // The hyperplane {s x1 = t x0} must contain the line.
    if (K.mul(s, L.at(r, 1)) != K.mul(t, L.at(r, 0))) throw Error(ErrorCode::InvalidInput, "line is not in the fiber hyperplane");
    if (quad_value(K, fib.gram, x) != 0) throw Error(ErrorCode::InvalidInput, "line is not on the fiber quadric");
  }
  if (fib.reps.size() == 1) return 0;
  return (L == fib.reps[0] || !line_meets(K, L, fib.reps[0])) ? 0 : 1;
}

std::vector<Line> fiber_lines_through(const Field& K, const Fiber& fib, const Vec& x) {
  const auto [s, t] = fib.param;
  std::vector<Line> out;
  for (const auto& l : quadric_lines_through(K, fib.gram, ambient_to_fiber(K, s, t, x))) {
    out.push_back(make_line(K, fiber_to_ambient(K, s, t, l[0]), fiber_to_ambient(K, s, t, l[1])));
  }
  return out;
}

std::vector<std::vector<Line>> rulings_of_fiber(const NormalizedThreefold& nf, FiberIndex i) {
  const Field& K = nf.F();
  const auto [s, t] = fiber_param(K, i);
  const Mat M = fiber_matrix(nf, s, t);
  const int r = rank(K, M);
  if (r <= 2) throw Error(ErrorCode::NotGeneral, "fiber quadric of rank at most 2");
  std::set<Line> all;
  for (const auto& y : quadric_points(K, M)) {
    if (r == 3 && rank(K, {apply(K, M, y)}) == 0) continue;  // the vertex
    for (const auto& l : quadric_lines_through(K, M, y)) {
      all.insert(make_line(K, fiber_to_ambient(K, s, t, l[0]), fiber_to_ambient(K, s, t, l[1])));
    }
  }
  std::vector<std::vector<Line>> classes;
  if (all.empty()) return classes;
  if (r == 3) {
    classes.emplace_back(all.begin(), all.end());
    return classes;
  }
  for (const Line& L : all) {
    bool placed = false;
    for (auto& cls : classes) {
      if (!line_meets(K, cls.front(), L)) {
        cls.push_back(L);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({L});
  }
  // Congruence: disjoint within a class, meeting across classes.
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = 0; b < classes.size(); ++b) {
      for (const Line& L : classes[a]) {
        for (const Line& N : classes[b]) {
          if (L == N) continue;
          if (line_meets(K, L, N) != (a != b)) throw Error(ErrorCode::InternalInconsistency, "ruling rule is not a congruence");
        }
      }
    }
  }
  return classes;
}

namespace {

const Field& extension(const BinaryForm& f, unsigned k) {
  const Field& F = f.field();
  return Field::get(F.characteristic(), F.degree() * k);
}

}  // namespace

std::int64_t count_points_C(const HyperellipticModel& C, unsigned k) {
  const Field& K = extension(C.disc, k);
  const BinaryForm d = C.disc.mapped(Embedding::get(C.disc.field(), K));
  std::int64_t n = 0;
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const auto [s, t] = fiber_param(K, i);
    n += 1 + K.chi(d.evaluate(s, t));
  }
  return n;
}

std::int64_t count_points_C_naive(const HyperellipticModel& C, unsigned k) {
  const Field& K = extension(C.disc, k);
  const BinaryForm d = C.disc.mapped(Embedding::get(C.disc.field(), K));
  std::int64_t n = 0;
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const auto [s, t] = fiber_param(K, i);
    const Elt v = d.evaluate(s, t);
    for (Elt y = 0; y < K.size(); ++y) n += K.mul(y, y) == v;
  }
  return n;
}

ZetaData zeta_from_counts(std::int64_t q, std::int64_t N1, std::int64_t N2) {
  ZetaData z;
  z.q = q;
  z.N1 = N1;
  z.N2 = N2;
  const std::int64_t p1 = q + 1 - N1, p2 = q * q + 1 - N2;
  z.c1 = -p1;
  if ((p1 * p1 - p2) % 2 != 0) throw Error(ErrorCode::InternalInconsistency, "odd second zeta coefficient");
  z.c2 = (p1 * p1 - p2) / 2;
  const std::int64_t c1 = z.c1, c2 = z.c2;
  // Both real Weil numbers a, b of x^2 + c1 x + (c2 - 2q) lie in [-2 sqrt q, 2 sqrt q].
  const bool weil = c1 * c1 <= 16 * q && 2 * q + c2 >= 0 && (2 * q + c2) * (2 * q + c2) >= 4 * c1 * c1 * q &&
                    c1 * c1 >= 4 * c2 - 8 * q;
  if (!weil) throw Error(ErrorCode::InternalInconsistency, "point counts violate the Weil bounds");
  z.h = 1 + c1 + c2 + q * c1 + q * q;
  z.h2 = z.h * (1 - c1 + c2 - q * c1 + q * q);
  if (z.h <= 0) throw Error(ErrorCode::InternalInconsistency, "nonpositive class number");
  return z;
}

ZetaData zeta(const HyperellipticModel& C) {
  if (!C.disc.is_reduced()) throw Error(ErrorCode::NotGeneral, "discriminant is not reduced");
  const std::int64_t q = C.disc.field().size();
  return zeta_from_counts(q, count_points_C(C, 1), count_points_C(C, 2));
}

std::int64_t class_number_by_effective_divisors(const HyperellipticModel& C) {
  const std::int64_t q = C.disc.field().size();
  const std::int64_t N1 = count_points_C_naive(C, 1), N2 = count_points_C_naive(C, 2);
  // Unordered rational pairs plus conjugate pairs of quadratic points.
  const std::int64_t effective = N1 * (N1 + 1) / 2 + (N2 - N1) / 2;
  return effective - q;
}

OperationalCurve operational_curve(const NormalizedThreefold& nf) {
  const Field& K = nf.F();
  OperationalCurve out;
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const Fiber fib = make_fiber(nf, i);
    out.classes_per_fiber.push_back(fib.num_classes());
    for (int c = 0; c < fib.num_classes(); ++c) out.points.push_back({i, static_cast<std::uint8_t>(c)});
  }
  return out;
}

bool match_models(const NormalizedThreefold& nf, const HyperellipticModel& C) {
  for (unsigned k = 1; k <= 2; ++k) {
    const Field& K = Field::get(nf.F().characteristic(), nf.F().degree() * k);
    const OperationalCurve op = operational_curve(base_change(nf, K));
    if (static_cast<std::int64_t>(op.points.size()) != count_points_C(C, k)) return false;
    const BinaryForm d = C.disc.mapped(Embedding::get(C.disc.field(), K));
    for (FiberIndex i = 0; i < fiber_count(K); ++i) {
      const auto [s, t] = fiber_param(K, i);
      if (op.classes_per_fiber[i] != 1 + K.chi(d.evaluate(s, t))) return false;
    }
  }
  return true;
}

}  // namespace fanoscope
