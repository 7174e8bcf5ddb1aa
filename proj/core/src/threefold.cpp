#include "fanoscope/threefold.hpp"

#include <algorithm>
#include <array>

#include "fanoscope/error.hpp"

namespace fanoscope {
namespace {

HomogeneousForm conic_on_plane(const HomogeneousForm& Q) {
  const Field& F = Q.field();
  HomogeneousForm c(F, 3, 2);
  for (const auto& [e, v] : Q.terms()) {
    if (e[0] || e[1]) continue;
    c.add_term(make_exponent({e[2], e[3], e[4]}), v);
  }
  return c;
}

void split(const HomogeneousForm& f, HomogeneousForm& Q0, HomogeneousForm& Q1) {
  const Field& F = f.field();
  Q0 = HomogeneousForm(F, 5, 2);
  Q1 = HomogeneousForm(F, 5, 2);
  for (const auto& [e, v] : f.terms()) {
    Exponent r = e;
    if (e[0] > 0) {
      r[0] -= 1;
      Q0.add_term(r, v);
    } else if (e[1] > 0) {
      r[1] -= 1;
      Q1.add_term(r, v);
    } else {
      throw Error(ErrorCode::NotContained, "plane {x0 = x1 = 0} is not on the cubic");
    }
  }
}

// Common zeros over K of two ternary quadrics; throws NotGeneral when the
// intersection is not finite.
std::vector<Vec> common_conic_points(const HomogeneousForm& A, const HomogeneousForm& B) {
  const Field& K = A.field();
  if (A.is_zero() || B.is_zero()) throw Error(ErrorCode::NotGeneral, "a conic of the pencil restricted to P is zero");
  std::vector<Vec> pts;
  auto coeffs = [&](const HomogeneousForm& Q, Elt a, Elt b) {
    // Q(a, b, x) = alpha x^2 + beta x + gamma.
    Elt alpha = 0, beta = 0, gamma = 0;
    for (const auto& [e, v] : Q.terms()) {
      const Elt m = K.mul(v, K.mul(K.pow(a, e[0]), K.pow(b, e[1])));
      if (e[2] == 2) alpha = K.add(alpha, m);
      else if (e[2] == 1) beta = K.add(beta, m);
      else gamma = K.add(gamma, m);
    }
    return UPoly(K, {gamma, beta, alpha});
  };
  auto visit = [&](Elt a, Elt b) {
    const UPoly pa = coeffs(A, a, b), pb = coeffs(B, a, b);
    if (pa.is_zero() && pb.is_zero()) throw Error(ErrorCode::NotGeneral, "the two conics share a line");
    const UPoly g = gcd(pa, pb);
    for (const auto& [x, m] : roots_with_multiplicity(g)) pts.push_back({a, b, x});
  };
  for (Elt l = 0; l < K.size(); ++l) visit(1, l);
  visit(0, 1);
  const std::vector<Elt> apex{0, 0, 1};
  if (A.evaluate(apex) == 0 && B.evaluate(apex) == 0) pts.push_back(apex);
  if (pts.size() > 4) throw Error(ErrorCode::NotGeneral, "the two conics share a component");
  return pts;
}

Point ambient_z(const Field& K, const Vec& p) {
  const Vec v{0, 0, p[0], p[1], p[2]};
  return make_point(K, v);
}

unsigned minimal_degree(const Field& W, unsigned base_degree, const Point& p) {
  const unsigned rel = W.degree() / base_degree;
  for (unsigned d = 1; d <= rel; ++d) {
    if (rel % d) continue;
    if (frobenius(W, p, d * base_degree) == p) return d;
  }
  return rel;
}

}  // namespace

HomogeneousForm NormalizedThreefold::conic0() const { return conic_on_plane(Q0); }
HomogeneousForm NormalizedThreefold::conic1() const { return conic_on_plane(Q1); }

NormalizedThreefold normalize(const HomogeneousForm& cubic, const Subspace& plane) {
  if (cubic.num_vars() != 5 || cubic.degree() != 3) throw Error(ErrorCode::ArityError, "expected a cubic in 5 variables");
  if (plane.n != 5 || plane.rows.size() != 3) throw Error(ErrorCode::InvalidInput, "expected a plane in P^4");
  const Field& F = cubic.field();
  std::vector<int> pivots;
  for (const auto& row : plane.rows) {
    int c = 0;
    while (row[c] == 0) ++c;
    pivots.push_back(c);
  }
  Mat A(5, Vec(5, 0));
  int col = 0;
  for (int j = 0; j < 5; ++j) {
    if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
    A[j][col++] = 1;
  }
  for (const auto& row : plane.rows) {
    for (int i = 0; i < 5; ++i) A[i][col] = row[i];
    ++col;
  }
  NormalizedThreefold nf{&F, A, cubic.substitute(A), HomogeneousForm(F, 5, 2), HomogeneousForm(F, 5, 2)};
  split(nf.f, nf.Q0, nf.Q1);
  return nf;
}

NormalizedThreefold from_quadrics(const HomogeneousForm& Q0, const HomogeneousForm& Q1) {
  const Field& F = Q0.field();
  const HomogeneousForm f = HomogeneousForm::variable(F, 5, 0) * Q0 + HomogeneousForm::variable(F, 5, 1) * Q1;
  NormalizedThreefold nf{&F, identity(5), f, HomogeneousForm(F, 5, 2), HomogeneousForm(F, 5, 2)};
  split(nf.f, nf.Q0, nf.Q1);
  return nf;
}

NormalizedThreefold base_change(const NormalizedThreefold& nf, const Field& K) {
  const Embedding& e = Embedding::get(nf.F(), K);
  Mat change = nf.change;
  for (auto& row : change)
    for (auto& v : row) v = e(v);
  return NormalizedThreefold{&K, change, nf.f.mapped(e), nf.Q0.mapped(e), nf.Q1.mapped(e)};
}

bool SingularLocusZ::reduced() const {
  return std::all_of(points.begin(), points.end(), [](const ZPoint& z) { return z.multiplicity == 1; });
}

int SingularLocusZ::total_length() const {
  int s = 0;
  for (const auto& z : points) s += z.multiplicity;
  return s;
}

std::size_t SingularLocusZ::rational_count() const {
  return std::count_if(points.begin(), points.end(), [](const ZPoint& z) { return z.degree == 1; });
}

std::vector<Point> z_points_over(const NormalizedThreefold& nf, const Field& K) {
  const Embedding& e = Embedding::get(nf.F(), K);
  std::vector<Point> out;
  for (const auto& p : common_conic_points(nf.conic0().mapped(e), nf.conic1().mapped(e))) out.push_back(ambient_z(K, p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SingularLocusZ compute_Z(const NormalizedThreefold& nf) {
  const Field& F = nf.F();
  const unsigned p = F.characteristic(), k = F.degree();
  const HomogeneousForm A = nf.conic0(), B = nf.conic1();
  // All geometric points have degree <= 4; a degree-3 point forces the
  // remaining one to be rational, otherwise F_{q^4} holds everything.
  const Field* W = &Field::get(p, 3 * k);
  std::vector<Point> pts = z_points_over(nf, *W);
  const bool cubic_orbit =
      std::any_of(pts.begin(), pts.end(), [&](const Point& z) { return minimal_degree(*W, k, z) == 3; });
  if (!cubic_orbit) {
    W = &Field::get(p, 4 * k);
    pts = z_points_over(nf, *W);
  }
  const Embedding& e = Embedding::get(F, *W);
  const HomogeneousForm AW = A.mapped(e), BW = B.mapped(e);
  if (pts.empty()) throw Error(ErrorCode::InternalInconsistency, "two conics with no common point over F_{q^4}");

  // Projection center c = (1, a, b): off both conics and off every chord of Z.
  auto plane_coords = [](const Point& z) { return Vec{z[2], z[3], z[4]}; };
  Vec c;
  for (Elt a = 0; a < W->size() && c.empty(); ++a) {
    for (Elt b = 0; b < W->size() && c.empty(); ++b) {
      const Vec cand{1, a, b};
      if (AW.evaluate(cand) == 0 || BW.evaluate(cand) == 0) continue;
      bool ok = true;
      for (std::size_t i = 0; i < pts.size() && ok; ++i) {
        for (std::size_t j = i + 1; j < pts.size() && ok; ++j) {
          ok = determinant(*W, {cand, plane_coords(pts[i]), plane_coords(pts[j])}) != 0;
        }
      }
      if (ok) c = cand;
    }
  }
  if (c.empty()) throw Error(ErrorCode::InternalInconsistency, "no projection center for Z");
  const std::vector<std::vector<Elt>> M{{c[0], 0, 0}, {c[1], 1, 0}, {c[2], 0, 1}};
  auto abc = [&](const HomogeneousForm& Q) {
    const HomogeneousForm R = Q.substitute(M);
    const Elt alpha = R.coefficient(make_exponent({2, 0, 0}));
    const BinaryForm beta(*W, 1, {R.coefficient(make_exponent({1, 1, 0})), R.coefficient(make_exponent({1, 0, 1}))});
    const BinaryForm gamma(*W, 2, {R.coefficient(make_exponent({0, 2, 0})), R.coefficient(make_exponent({0, 1, 1})),
                                   R.coefficient(make_exponent({0, 0, 2}))});
    return std::tuple{alpha, beta, gamma};
  };
  const auto [a1, b1, g1] = abc(AW);
  const auto [a2, b2, g2] = abc(BW);
  const BinaryForm ag = g2.scaled(a1) - g1.scaled(a2);
  const BinaryForm ab = b2.scaled(a1) - b1.scaled(a2);
  const BinaryForm bg = b1 * g2 - b2 * g1;
  const BinaryForm res = ag * ag - ab * bg;
  if (res.is_zero()) throw Error(ErrorCode::NotGeneral, "resultant of the conics vanishes identically");

  SingularLocusZ Z;
  Z.field = W;
  const auto roots = res.projective_roots();
  int matched = 0;
  for (const auto& z : pts) {
    // z = z2 c + y1 e1 + y2 e2; the root (s:t) of res over z has s : t = y1 : y2.
    const Vec y1{W->sub(z[3], W->mul(z[2], c[1])), W->sub(z[4], W->mul(z[2], c[2]))};
    int mult = 0;
    for (const auto& [r, m] : roots) {
      if (W->mul(r[0], y1[1]) == W->mul(r[1], y1[0])) {
        mult = m;
        ++matched;
      }
    }
    if (mult == 0) throw Error(ErrorCode::InternalInconsistency, "Z point missing from the resultant");
    Z.points.push_back({z, mult, minimal_degree(*W, k, z)});
  }
  if (matched != static_cast<int>(roots.size()) || Z.total_length() != 4) {
    throw Error(ErrorCode::InternalInconsistency, "resultant roots do not match Z");
  }
  std::stable_sort(Z.points.begin(), Z.points.end(), [](const ZPoint& a, const ZPoint& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.point < b.point;
  });
  // Group non-rational points into Frobenius orbits.
  std::vector<ZPoint> grouped;
  std::vector<bool> used(Z.points.size(), false);
  for (std::size_t i = 0; i < Z.points.size(); ++i) {
    if (used[i]) continue;
    Point cur = Z.points[i].point;
    for (unsigned j = 0; j < Z.points[i].degree; ++j) {
      for (std::size_t l = i; l < Z.points.size(); ++l) {
        if (!used[l] && Z.points[l].point == cur) {
          used[l] = true;
          grouped.push_back(Z.points[l]);
        }
      }
      cur = frobenius(*W, cur, k);
    }
  }
  Z.points = std::move(grouped);
  return Z;
}

std::vector<Subspace> planes_on_cubic(const HomogeneousForm& f) {
  const Field& F = f.field();
  const int n = f.num_vars();
  std::vector<Subspace> out;
  // Values of f on all of F^n when that table is small; candidates are then
  // screened by lookups before the exact restriction test.
  const std::uint64_t q = F.size();
  std::uint64_t cells = 1;
  for (int i = 0; i < n && cells <= (1u << 22); ++i) cells *= q;
  std::vector<std::uint8_t> zero;
  if (cells <= (1u << 22)) {
    zero.assign(cells, 0);
    Vec v(n, 0);
    for (std::uint64_t code = 0; code < cells; ++code) {
      std::uint64_t c = code;
      for (int i = 0; i < n; ++i, c /= q) v[i] = static_cast<Elt>(c % q);
      zero[code] = f.evaluate(v) == 0;
    }
  }
  auto vanishes = [&](const Vec& v) {
    if (zero.empty()) return f.evaluate(v) == 0;
    std::uint64_t code = 0;
    for (int i = n; i-- > 0;) code = code * q + v[i];
    return zero[code] != 0;
  };
  // Planes of P^{n-1} in RREF: choose 3 pivot columns; each row ranges over
  // its free entries and only rows on the cubic are kept.
  for (int p0 = 0; p0 < n; ++p0) {
    for (int p1 = p0 + 1; p1 < n; ++p1) {
      for (int p2 = p1 + 1; p2 < n; ++p2) {
        const int piv[3] = {p0, p1, p2};
        std::array<std::vector<Vec>, 3> rows;
        for (int r = 0; r < 3; ++r) {
          std::vector<int> free;
          for (int c = piv[r] + 1; c < n; ++c) {
            if (c != p0 && c != p1 && c != p2) free.push_back(c);
          }
          Vec v(n, 0);
          v[piv[r]] = 1;
          while (true) {
            if (vanishes(v)) rows[r].push_back(v);
            std::size_t i = 0;
            while (i < free.size() && ++v[free[i]] == q) v[free[i++]] = 0;
            if (i == free.size()) break;
          }
        }
        for (const Vec& a : rows[0]) {
          for (const Vec& b : rows[1]) {
            if (!vanishes(axpy(F, 1, a, 1, b))) continue;
            for (const Vec& c : rows[2]) {
              if (!vanishes(axpy(F, 1, b, 1, c)) || !vanishes(axpy(F, 1, a, 1, c))) continue;
              Subspace S{n, {a, b, c}};
              if (restrict_form(f, S).is_zero()) out.push_back(S);
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Subspace& x, const Subspace& y) { return x.rows < y.rows; });
  return out;
}

}  // namespace fanoscope
