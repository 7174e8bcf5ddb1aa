#include "fanoscope/projective.hpp"

#include "fanoscope/error.hpp"

namespace fanoscope {

std::size_t LineHash::operator()(const Line& L) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < 2 * L.n; ++i) {
    h ^= L.m[i];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Point make_point(const Field& F, std::span<const Elt> v) {
  if (v.size() > kMaxCoords) throw Error(ErrorCode::ArityError, "too many coordinates");
  Point p;
  p.n = static_cast<std::uint8_t>(v.size());
  std::size_t i = 0;
  while (i < v.size() && v[i] == 0) ++i;
  if (i == v.size()) throw Error(ErrorCode::Degenerate, "zero vector is not a projective point");
  const Elt inv = F.inv(v[i]);
  for (std::size_t j = 0; j < v.size(); ++j) p.x[j] = F.mul(v[j], inv);
  return p;
}

Line make_line(const Field& F, const Vec& a, const Vec& b) {
  if (a.size() != b.size() || a.size() > kMaxCoords) throw Error(ErrorCode::ArityError, "line rows must have equal length");
  Mat rows{a, b};
  if (rref(F, rows) != 2) throw Error(ErrorCode::Degenerate, "vectors do not span a line");
  Line L;
  L.n = static_cast<std::uint8_t>(a.size());
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < L.n; ++c) L.m[r * L.n + c] = rows[r][c];
  }
  return L;
}

Line line_through(const Field& F, const Point& a, const Point& b) { return make_line(F, a.vec(), b.vec()); }

Subspace make_subspace(const Field& F, Mat rows) {
  Subspace S;
  S.n = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  rref(F, rows);
  S.rows = std::move(rows);
  return S;
}

Vec point_on(const Field& F, const Line& L, Elt s, Elt t) {
  Vec v(L.n);
  for (int c = 0; c < L.n; ++c) v[c] = F.add(F.mul(s, L.at(0, c)), F.mul(t, L.at(1, c)));
  return v;
}

bool contains(const Field& F, const Line& L, const Vec& v) {
  Mat rows{L.row(0), L.row(1), v};
  return rank(F, rows) == 2;
}

bool contains(const Field& F, const Subspace& S, const Vec& v) {
  Mat rows = S.rows;
  rows.push_back(v);
  return rank(F, rows) == static_cast<int>(S.rows.size());
}

bool contains(const Field& F, const Subspace& S, const Line& L) {
  Mat rows = S.rows;
  rows.push_back(L.row(0));
  rows.push_back(L.row(1));
  return rank(F, rows) == static_cast<int>(S.rows.size());
}

Vec subspace_coords(const Subspace& S, const Vec& v) {
  Vec y(S.rows.size());
  for (std::size_t r = 0; r < S.rows.size(); ++r) {
    int c = 0;
    while (S.rows[r][c] == 0) ++c;
    y[r] = v[c];
  }
  return y;
}

Subspace span(const Field& F, const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidInput, "span of nothing");
  return make_subspace(F, vectors);
}

Subspace span(const Field& F, const Line& L, const Vec& v) { return span(F, {L.row(0), L.row(1), v}); }

Subspace span(const Field& F, const Line& L, const Line& M) { return span(F, {L.row(0), L.row(1), M.row(0), M.row(1)}); }

bool line_meets(const Field& F, const Line& L, const Line& M) {
  return rank(F, Mat{L.row(0), L.row(1), M.row(0), M.row(1)}) <= 3;
}

std::optional<Point> meet_point(const Field& F, const Line& L, const Line& M) {
  if (L == M) return std::nullopt;
  const int n = L.n;
  Mat eq(n, Vec(4));
  for (int c = 0; c < n; ++c) {
    eq[c][0] = L.at(0, c);
    eq[c][1] = L.at(1, c);
    eq[c][2] = F.neg(M.at(0, c));
    eq[c][3] = F.neg(M.at(1, c));
  }
  Mat ker = kernel(F, eq, 4);
  if (ker.size() != 1) return std::nullopt;
  return make_point(F, point_on(F, L, ker[0][0], ker[0][1]));
}

Point map_point(const Embedding& e, const Point& p) {
  Point out = p;
  for (int i = 0; i < p.n; ++i) out.x[i] = e(p.x[i]);
  return out;
}

Line map_line(const Embedding& e, const Line& L) {
  Line out = L;
  for (int i = 0; i < 2 * L.n; ++i) out.m[i] = e(L.m[i]);
  return out;
}

std::optional<Line> restrict_line(const Embedding& e, const Line& L) {
  Line out = L;
  for (int i = 0; i < 2 * L.n; ++i) {
    auto v = e.restrict(L.m[i]);
    if (!v) return std::nullopt;
    out.m[i] = *v;
  }
  return out;
}

std::optional<Point> restrict_point(const Embedding& e, const Point& p) {
  Point out = p;
  for (int i = 0; i < p.n; ++i) {
    auto v = e.restrict(p.x[i]);
    if (!v) return std::nullopt;
    out.x[i] = *v;
  }
  return out;
}

Line frobenius(const Field& F, const Line& L, unsigned j) {
  Line out = L;
  for (int i = 0; i < 2 * L.n; ++i) out.m[i] = F.frobenius(L.m[i], j);
  return out;
}

Point frobenius(const Field& F, const Point& p, unsigned j) {
  Point out = p;
  for (int i = 0; i < p.n; ++i) out.x[i] = F.frobenius(p.x[i], j);
  return out;
}

void for_each_line(const Field& F, int n, const std::function<void(const Line&)>& fn) {
  if (n < 1 || n + 1 > kMaxCoords) throw Error(ErrorCode::ArityError, "unsupported ambient dimension");
  const int N = n + 1;
  const Elt q = F.size();
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      std::vector<int> slots;  // indices into Line::m
      for (int c = i + 1; c < N; ++c) {
        if (c != j) slots.push_back(c);
      }
      for (int c = j + 1; c < N; ++c) slots.push_back(N + c);
      Line L;
      L.n = static_cast<std::uint8_t>(N);
      L.m[i] = 1;
      L.m[N + j] = 1;
      while (true) {
        fn(L);
        int k = static_cast<int>(slots.size()) - 1;
        while (k >= 0) {
          Elt& v = L.m[slots[k]];
          if (++v < q) break;
          v = 0;
          --k;
        }
        if (k < 0) break;
      }
    }
  }
}

std::vector<Line> enumerate_lines(const Field& F, int n) {
  std::vector<Line> out;
  out.reserve(static_cast<std::size_t>(line_count(F.size(), n)));
  for_each_line(F, n, [&](const Line& L) { out.push_back(L); });
  return out;
}

std::uint64_t point_count(std::uint64_t q, int n) {
  std::uint64_t s = 0, p = 1;
  for (int i = 0; i <= n; ++i) {
    s += p;
    p *= q;
  }
  return s;
}

std::uint64_t line_count(std::uint64_t q, int n) {
  std::uint64_t a = 1, b = 1;
  for (int i = 0; i <= n; ++i) a *= q;
  for (int i = 0; i < n; ++i) b *= q;
  return (a - 1) * (b - 1) / ((q * q - 1) * (q - 1));
}

void for_each_point(const Field& F, int n, const std::function<void(const Point&)>& fn) {
  const int N = n + 1;
  const Elt q = F.size();
  for (int i = 0; i < N; ++i) {
    Point p;
    p.n = static_cast<std::uint8_t>(N);
    p.x[i] = 1;
    while (true) {
      fn(p);
      int k = N - 1;
      while (k > i) {
        if (++p.x[k] < q) break;
        p.x[k] = 0;
        --k;
      }
      if (k == i) break;
    }
  }
}

std::vector<Point> enumerate_points(const Field& F, int n) {
  std::vector<Point> out;
  for_each_point(F, n, [&](const Point& p) { out.push_back(p); });
  return out;
}

std::vector<Point> points_of_line(const Field& F, const Line& L) {
  std::vector<Point> out;
  out.reserve(F.size() + 1);
  for (Elt l = 0; l < F.size(); ++l) out.push_back(make_point(F, point_on(F, L, 1, l)));
  out.push_back(make_point(F, point_on(F, L, 0, 1)));
  return out;
}

BinaryForm restrict_to_line(const HomogeneousForm& f, const Line& L) {
  std::vector<std::vector<Elt>> A(L.n, std::vector<Elt>(2));
  for (int c = 0; c < L.n; ++c) {
    A[c][0] = L.at(0, c);
    A[c][1] = L.at(1, c);
  }
  const HomogeneousForm g = f.substitute(A);
  const int d = f.degree();
  BinaryForm b(f.field(), d);
  for (int i = 0; i <= d; ++i) {
    Exponent e{};
    e[0] = static_cast<std::uint8_t>(d - i);
    e[1] = static_cast<std::uint8_t>(i);
    b.set_coeff(i, g.coefficient(e));
  }
  return b;
}

bool vanishes_on_line(const HomogeneousForm& f, const Line& L) {
  const Field& F = f.field();
  const int d = f.degree();
  if (static_cast<std::uint64_t>(d) + 1 > static_cast<std::uint64_t>(F.size()) + 1) return restrict_to_line(f, L).is_zero();
  if (f.evaluate(L.row(1)) != 0) return false;
  for (int l = 0; l < d; ++l) {
    if (f.evaluate(point_on(F, L, 1, static_cast<Elt>(l))) != 0) return false;
  }
  return true;
}

HomogeneousForm restrict_form(const HomogeneousForm& f, const Subspace& S) {
  if (S.n != f.num_vars()) throw Error(ErrorCode::ArityError, "subspace lives in a different ambient space");
  std::vector<std::vector<Elt>> A(S.n, std::vector<Elt>(S.rows.size()));
  for (int c = 0; c < S.n; ++c) {
    for (std::size_t r = 0; r < S.rows.size(); ++r) A[c][r] = S.rows[r][c];
  }
  return f.substitute(A);
}

Vec cross(const Field& F, const Vec& a, const Vec& b) {
  return {F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])), F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
          F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))};
}

std::optional<HomogeneousForm> divide_by_linear(const HomogeneousForm& g, const HomogeneousForm& l) {
  const Field& F = g.field();
  const int n = g.num_vars();
  int k = -1;
  Elt lk = 0;
  for (int i = 0; i < n && k < 0; ++i) {
    Exponent e{};
    e[i] = 1;
    lk = l.coefficient(e);
    if (lk != 0) k = i;
  }
  if (k < 0) throw Error(ErrorCode::DivisionByZero, "division by the zero linear form");
  if (g.degree() == 0) return g.is_zero() ? std::optional<HomogeneousForm>(HomogeneousForm(F, n, 0)) : std::nullopt;
  const Elt lk_inv = F.inv(lk);
  HomogeneousForm rem = g;
  HomogeneousForm quo(F, n, g.degree() - 1);
  while (true) {
    const Exponent* best = nullptr;
    Elt coeff = 0;
    for (const auto& [e, c] : rem.terms()) {
      if (e[k] > 0 && (!best || e[k] > (*best)[k])) {
        best = &e;
        coeff = c;
      }
    }
    if (!best) break;
    Exponent qe = *best;
    qe[k] -= 1;
    HomogeneousForm term(F, n, g.degree() - 1);
    term.add_term(qe, F.mul(coeff, lk_inv));
    quo = quo + term;
    rem = rem - term * l;
  }
  if (!rem.is_zero()) return std::nullopt;
  return quo;
}

Residual residual_line(const HomogeneousForm& cubic, const Subspace& plane, const Line& L, const Line& M) {
  const Field& F = cubic.field();
  if (cubic.degree() != 3) throw Error(ErrorCode::ArityError, "residual_line needs a cubic");
  if (plane.rows.size() != 3) throw Error(ErrorCode::InvalidInput, "residual_line needs a plane");
  if (!contains(F, plane, L) || !contains(F, plane, M)) throw Error(ErrorCode::InvalidInput, "lines must lie in the plane");
  const HomogeneousForm g = restrict_form(cubic, plane);
  if (g.is_zero()) throw Error(ErrorCode::PlaneContained, "plane lies on the cubic");
  auto linear_of = [&](const Line& X) {
    const Vec a = subspace_coords(plane, X.row(0));
    const Vec b = subspace_coords(plane, X.row(1));
    return HomogeneousForm::linear(F, cross(F, a, b));
  };
  const HomogeneousForm lL = linear_of(L);
  const HomogeneousForm lM = linear_of(M);
  auto q1 = divide_by_linear(g, lL);
  if (!q1) throw Error(ErrorCode::NotOnCubic, "cubic does not vanish on the first line");
  auto q2 = divide_by_linear(*q1, lM);
  if (!q2) {
    if (L == M) throw Error(ErrorCode::NotOnCubic, "plane is not tangent to the cubic along the line");
    throw Error(ErrorCode::NotOnCubic, "cubic does not vanish on the second line");
  }
  if (q2->degree() != 1 || q2->is_zero()) throw Error(ErrorCode::InternalInconsistency, "residual factor is not linear");
  Vec coeffs(3);
  for (int i = 0; i < 3; ++i) {
    Exponent e{};
    e[i] = 1;
    coeffs[i] = q2->coefficient(e);
  }
  Mat ker = kernel(F, Mat{coeffs}, 3);
  auto ambient = [&](const Vec& y) {
    Vec v(plane.n, 0);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < plane.n; ++c) v[c] = F.add(v[c], F.mul(y[r], plane.rows[r][c]));
    }
    return v;
  };
  Residual res;
  res.line = make_line(F, ambient(ker[0]), ambient(ker[1]));
  res.multiplicity = 1 + (res.line == L ? 1 : 0) + (res.line == M ? 1 : 0);
  return res;
}

std::string to_string(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.n; ++i) s += (i ? ":" : "") + std::to_string(p[i]);
  return s + ")";
}

std::string to_string(const Line& L) {
  std::string s = "[";
  for (int r = 0; r < 2; ++r) {
    s += r ? ",(" : "(";
    for (int i = 0; i < L.n; ++i) s += (i ? ":" : "") + std::to_string(L.at(r, i));
    s += ")";
  }
  return s + "]";
}

}  // namespace fanoscope
