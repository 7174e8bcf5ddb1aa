#include "fanoscope/fano.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "fanoscope/error.hpp"

namespace fanoscope {

namespace {

// g(x) = c0 + c1 x + c2 x^2 recovered from g(0), g(1), g(-1).
UPoly interpolate_quadratic(const Field& K, Elt g0, Elt g1, Elt gm) {
  const Elt half = K.inv(K.from_int(2));
  const Elt c2 = K.sub(K.mul(K.add(g1, gm), half), g0);
  const Elt c1 = K.mul(K.sub(g1, gm), half);
  return UPoly(K, {g0, c1, c2});
}

// Values x with g(x) = 0; every element when g is identically zero.
std::vector<Elt> zeros_of(const Field& K, const UPoly& g) {
  std::vector<Elt> out;
  if (g.is_zero()) {
    for (Elt x = 0; x < K.size(); ++x) out.push_back(x);
    return out;
  }
  for (const auto& [x, m] : roots_with_multiplicity(g)) out.push_back(x);
  return out;
}

// Points v = base + sum l_i dirs_i of an affine space with q(v) = 0.
void affine_quadric_zeros(const Field& K, const Vec& base, const Mat& dirs, const std::function<Elt(const Vec&)>& q,
                          const std::function<void(const Vec&)>& fn) {
  const std::size_t d = dirs.size();
  if (d == 0) {
    if (q(base) == 0) fn(base);
    return;
  }
  std::vector<Elt> lam(d - 1, 0);
  const Elt minus_one = K.from_int(-1);
  while (true) {
    Vec v = base;
    for (std::size_t i = 0; i + 1 < d; ++i) v = axpy(K, 1, v, lam[i], dirs[i]);
    auto at = [&](Elt x) { return q(axpy(K, 1, v, x, dirs[d - 1])); };
    for (Elt x : zeros_of(K, interpolate_quadratic(K, at(0), at(1), at(minus_one)))) fn(axpy(K, 1, v, x, dirs[d - 1]));
    std::size_t i = 0;
    while (i < lam.size() && ++lam[i] == K.size()) lam[i++] = 0;
    if (i == lam.size()) break;
  }
}

Line embed_plane_line(const Field& K, const Line& l) {
  return make_line(K, {0, 0, l.at(0, 0), l.at(0, 1), l.at(0, 2)}, {0, 0, l.at(1, 0), l.at(1, 1), l.at(1, 2)});
}

bool in_plane_P(const Line& L) {
  return L.at(0, 0) == 0 && L.at(0, 1) == 0 && L.at(1, 0) == 0 && L.at(1, 1) == 0;
}

LineTag tag_of(const Field& K, const Line& L) {
  const int r = rank(K, {{L.at(0, 0), L.at(1, 0)}, {L.at(0, 1), L.at(1, 1)}});
  return r == 0 ? LineTag::InPlane : r == 1 ? LineTag::MeetsPlaneOnce : LineTag::DisjointFromPlane;
}

Point meet_plane_P(const Field& K, const Line& L) {
  const Mat ker = kernel(K, {{L.at(0, 0), L.at(1, 0)}, {L.at(0, 1), L.at(1, 1)}}, 2);
  return make_point(K, axpy(K, ker[0][0], L.row(0), ker[0][1], L.row(1)));
}

unsigned line_degree(const Field& K, unsigned base_degree, const Line& L) {
  const unsigned rel = K.degree() / base_degree;
  for (unsigned d = 1; d <= rel; ++d) {
    if (rel % d == 0 && frobenius(K, L, d * base_degree) == L) return d;
  }
  return rel;
}

// Columns are the basis vectors; the form in the new variables.
HomogeneousForm restrict_to_basis(const HomogeneousForm& f, const std::vector<Vec>& basis) {
  Mat A(f.num_vars(), Vec(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (int i = 0; i < f.num_vars(); ++i) A[i][j] = basis[j][i];
  return f.substitute(A);
}

Vec combine(const Field& K, const std::vector<Vec>& basis, const Vec& coeffs) {
  Vec v(basis[0].size(), 0);
  for (std::size_t j = 0; j < basis.size(); ++j) v = axpy(K, 1, v, coeffs[j], basis[j]);
  return v;
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elt x) { return x == 0; });
}

}  // namespace

std::string_view to_string(LineTag tag) {
  switch (tag) {
    case LineTag::InPlane: return "InPlane";
    case LineTag::MeetsPlaneOnce: return "MeetsPlaneOnce";
    case LineTag::DisjointFromPlane: return "DisjointFromPlane";
  }
  return "?";
}

std::vector<Line> disjoint_lines(const NormalizedThreefold& nf) {
  const Field& K = nf.F();
  const auto grad = nf.f.gradient();
  std::vector<Line> out;
  const Mat a_dirs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  auto q0 = [&](const Vec& a) { return nf.Q0.evaluate(Vec{1, 0, a[0], a[1], a[2]}); };
  auto q1 = [&](const Vec& b) { return nf.Q1.evaluate(Vec{0, 1, b[0], b[1], b[2]}); };
  affine_quadric_zeros(K, {0, 0, 0}, a_dirs, q0, [&](const Vec& a) {
    const Vec A{1, 0, a[0], a[1], a[2]};
    Vec dfA(5);
    for (int i = 0; i < 5; ++i) dfA[i] = grad[i].evaluate(A);
    // grad f(A) . B = 0 is affine linear in b.
    const Vec row{dfA[2], dfA[3], dfA[4]};
    Vec base(3, 0);
    Mat dirs;
    if (is_zero_vec(row)) {
      if (dfA[1] != 0) return;
      dirs = a_dirs;
    } else {
      int j = 0;
      while (row[j] == 0) ++j;
      base[j] = K.div(K.neg(dfA[1]), row[j]);
      dirs = kernel(K, {row}, 3);
    }
    affine_quadric_zeros(K, base, dirs, q1, [&](const Vec& b) {
      const Line L = make_line(K, A, {0, 1, b[0], b[1], b[2]});
      if (vanishes_on_line(nf.f, L)) out.push_back(L);
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ClassifiedLine> enumerate_fano(const NormalizedThreefold& nf, unsigned k) {
  const Field& F = nf.F();
  const Field& K = Field::get(F.characteristic(), F.degree() * k);
  const NormalizedThreefold nfK = base_change(nf, K);
  std::vector<ClassifiedLine> out;
  auto push = [&](const Line& L, LineTag tag) {
    ClassifiedLine c;
    c.line = L;
    c.tag = tag;
    c.field_degree = line_degree(K, F.degree(), L);
    out.push_back(c);
    return &out.back();
  };
  for_each_line(K, 2, [&](const Line& l) { push(embed_plane_line(K, l), LineTag::InPlane); });
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const Fiber fib = make_fiber(nfK, i);
    for (const auto& cls : rulings_of_fiber(nfK, i)) {
      for (const Line& L : cls) {
        if (in_plane_P(L)) continue;
        ClassifiedLine* c = push(L, LineTag::MeetsPlaneOnce);
        c->meet = meet_plane_P(K, L);
        c->ruling = RulingPoint{i, static_cast<std::uint8_t>(class_of_line(K, fib, L))};
      }
    }
  }
  for (const Line& L : disjoint_lines(nfK)) push(L, LineTag::DisjointFromPlane);
  std::sort(out.begin(), out.end(), [](const ClassifiedLine& a, const ClassifiedLine& b) {
    return a.tag != b.tag ? a.tag < b.tag : a.line < b.line;
  });
  return out;
}

std::vector<Line> enumerate_fano_brute_force(const NormalizedThreefold& nf, unsigned k) {
  const Field& K = Field::get(nf.F().characteristic(), nf.F().degree() * k);
  const NormalizedThreefold nfK = base_change(nf, K);
  std::vector<Line> out;
  for_each_line(K, 4, [&](const Line& L) {
    if (vanishes_on_line(nfK.f, L)) out.push_back(L);
  });
  std::sort(out.begin(), out.end());
  return out;
}

FanoModel::FanoModel(const NormalizedThreefold& nf, const Field& K)
    : base_(&nf.F()), K_(&K), base_nf_(nf), nf_(base_change(nf, K)) {
  if (K.characteristic() != base_->characteristic() || K.degree() % base_->degree() != 0) {
    throw Error(ErrorCode::InvalidField, "model field must extend the base field");
  }
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    fibers_.push_back(make_fiber(nf_, i));
    for (int c = 0; c < fibers_.back().num_classes(); ++c) curve_.push_back({i, static_cast<std::uint8_t>(c)});
  }
  z_ = z_points_over(nf, K);
  grad_ = nf_.f.gradient();
}

FanoModel::~FanoModel() = default;

const FanoModel& FanoModel::extension() const {
  if (!ext_) ext_ = std::make_unique<FanoModel>(base_nf_, Field::get(K_->characteristic(), 2 * K_->degree()));
  return *ext_;
}

RulingPoint FanoModel::conjugate(RulingPoint c) const {
  if (fibers_[c.fiber].num_classes() == 2) c.cls ^= 1;
  return c;
}

RulingPoint FanoModel::frobenius(RulingPoint c, unsigned j) const {
  const auto [s, t] = fibers_[c.fiber].param;
  const FiberIndex i = fiber_index(*K_, K_->frobenius(s, j), K_->frobenius(t, j));
  const Line L = fanoscope::frobenius(*K_, fibers_[c.fiber].reps.at(c.cls), j);
  return {i, static_cast<std::uint8_t>(class_of_line(*K_, fibers_[i], L))};
}

bool FanoModel::is_z(const Point& p) const { return std::binary_search(z_.begin(), z_.end(), p); }

RulingPoint FanoModel::ruling_of(const Line& L) const {
  if (tag_of(*K_, L) != LineTag::MeetsPlaneOnce) throw Error(ErrorCode::InvalidInput, "line does not meet P once");
  const Vec v = L.row(0);  // off P: the RREF pivot of row 0 is x0 or x1
  const FiberIndex i = fiber_of_point(*K_, v);
  return {i, static_cast<std::uint8_t>(class_of_line(*K_, fibers_[i], L))};
}

ClassifiedLine FanoModel::classify(const Line& L) const {
  if (!vanishes_on_line(nf_.f, L)) throw Error(ErrorCode::NotOnCubic, "line is not on the threefold");
  ClassifiedLine c;
  c.line = L;
  c.tag = tag_of(*K_, L);
  c.field_degree = line_degree(*K_, base_->degree(), L);
  if (c.tag == LineTag::MeetsPlaneOnce) {
    c.meet = meet_plane_P(*K_, L);
    c.ruling = ruling_of(L);
  }
  return c;
}

Line FanoModel::tau(const Point& z, RulingPoint c) const {
  const Fiber& fib = fibers_[c.fiber];
  for (const Line& L : fiber_lines_through(*K_, fib, z.vec())) {
    if (class_of_line(*K_, fib, L) == c.cls) return L;
  }
  throw Error(ErrorCode::InternalInconsistency, "no line of the ruling class through " + to_string(z));
}

std::vector<Line> FanoModel::curve_of_lines(const Point& z) const {
  std::set<Line> out;
  for (const Fiber& fib : fibers_) {
    for (const Line& L : fiber_lines_through(*K_, fib, z.vec())) out.insert(L);
  }
  return {out.begin(), out.end()};
}

Line FanoModel::sigma(const Line& L, RulingPoint c) const {
  const Fiber& fib = fibers_[c.fiber];
  const auto [s, t] = fib.param;
  auto h = [&](const Vec& v) { return K_->sub(K_->mul(s, v[1]), K_->mul(t, v[0])); };
  const Vec r0 = L.row(0), r1 = L.row(1);
  const Vec y = axpy(*K_, h(r1), r0, K_->neg(h(r0)), r1);
  if (is_zero_vec(y)) throw Error(ErrorCode::InvalidInput, "line lies in the fiber hyperplane");
  // A line off P through a cone vertex would lie in the tangent hyperplane,
  // hence in the fiber; so y is a smooth point of the quadric.
  if (is_zero_vec(apply(*K_, fib.gram, ambient_to_fiber(*K_, s, t, y)))) {
    throw Error(ErrorCode::InternalInconsistency, "line disjoint from P passes through a cone vertex");
  }
  for (const Line& M : fiber_lines_through(*K_, fib, y)) {
    if (class_of_line(*K_, fib, M) == c.cls) return M;
  }
  throw Error(ErrorCode::NeedsExtension, "no line of the ruling class meets the line over F_" + std::to_string(K_->size()));
}

PhiResult FanoModel::phi(const Point& z, const Line& L) const {
  const Vec zv = z.vec(), a = L.row(0), b = L.row(1);
  const HomogeneousForm g = restrict_to_basis(nf_.f, {zv, a, b});
  if (g.is_zero()) throw Error(ErrorCode::PlaneContained, "span(L, z) lies on the threefold");
  // f(alpha z + beta a + gamma b) = alpha q(beta, gamma) since z is singular and L is on Y.
  const BinaryForm q(*K_, 2,
                     {g.coefficient(make_exponent({1, 2, 0})), g.coefficient(make_exponent({1, 1, 1})),
                      g.coefficient(make_exponent({1, 0, 2}))});
  if (q.is_zero()) throw Error(ErrorCode::InternalInconsistency, "residual conic of span(L, z) is not a line pair");
  PhiResult out;
  auto roots = q.projective_roots();
  const FanoModel* model = this;
  Vec zw = zv, aw = a, bw = b;
  int total = 0;
  for (const auto& [r, m] : roots) total += m;
  if (total < 2) {
    model = &extension();
    const Embedding& e = Embedding::get(*K_, model->K());
    roots = q.mapped(e).projective_roots();
    for (auto* v : {&zw, &aw, &bw})
      for (auto& x : *v) x = e(x);
  }
  const Field& W = model->K();
  std::vector<std::pair<Line, RulingPoint>> found;
  for (const auto& [r, m] : roots) {
    const Line M = make_line(W, zw, axpy(W, r[0], aw, r[1], bw));
    for (int i = 0; i < m; ++i) found.push_back({M, model->ruling_of(M)});
  }
  if (found.size() != 2) throw Error(ErrorCode::InternalInconsistency, "residual conic did not split into two lines");
  std::sort(found.begin(), found.end());
  out.field = &W;
  out.lines = {found[0].first, found[1].first};
  out.pair = {found[0].second, found[1].second};
  out.multiplicity = found[0].first == found[1].first ? 2 : 1;
  return out;
}

Subspace FanoModel::tangent_plane(const Point& z, const Line& line) const {
  const Field& K = *K_;
  const Vec zv = z.vec();
  Mat H(5, Vec(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) H[i][j] = grad_[i].partial(j).evaluate(zv);
  const Vec r0 = line.row(0), r1 = line.row(1);
  for (const Vec& w : {r0, r1, axpy(K, 1, r0, 1, r1), axpy(K, 1, r0, K.from_int(-1), r1)}) {
    if (rank(K, {w, zv}) < 2) continue;
    Vec gw(5);
    for (int i = 0; i < 5; ++i) gw[i] = grad_[i].evaluate(w);
    const Mat forms{apply(K, H, w), gw};
    if (rank(K, forms) < 2) continue;
    return make_subspace(K, kernel(K, forms, 5));
  }
  throw Error(ErrorCode::Degenerate, "cone of lines through z is singular along " + to_string(line));
}

std::optional<Line> FanoModel::psi(const Point& z, RulingPoint c, RulingPoint d) const {
  const Line lc = tau(z, c), ld = tau(z, d);
  if (in_plane_P(lc) && in_plane_P(ld)) return std::nullopt;
  if (lc == ld) return residual_line(nf_.f, tangent_plane(z, lc), lc, lc).line;
  return residual_line(nf_.f, span(*K_, lc, ld), lc, ld).line;
}

TPoint FanoModel::from_residual(const Line& N) const {
  switch (tag_of(*K_, N)) {
    case LineTag::DisjointFromPlane: return {TKind::U, N, Point{}};
    case LineTag::MeetsPlaneOnce: {
      const Point x = meet_plane_P(*K_, N);
      if (!is_z(x)) throw Error(ErrorCode::InternalInconsistency, "residual line meets P off Z: " + to_string(N));
      return {TKind::Cz, N, x};
    }
    case LineTag::InPlane: break;
  }
  throw Error(ErrorCode::InternalInconsistency, "residual line lies in P: " + to_string(N));
}

TPoint FanoModel::classify_t(const Line& L) const {
  if (!vanishes_on_line(nf_.f, L)) throw Error(ErrorCode::InvalidInput, "line is not on the threefold");
  switch (tag_of(*K_, L)) {
    case LineTag::DisjointFromPlane: return {TKind::U, L, Point{}};
    case LineTag::MeetsPlaneOnce: {
      const Point x = meet_plane_P(*K_, L);
      if (is_z(x)) return {TKind::Cz, L, x};
      break;
    }
    case LineTag::InPlane: break;
  }
  throw Error(ErrorCode::InvalidInput, "line is not a point of T: " + to_string(L));
}

Point FanoModel::other_z_on(const Line& L, const Point& z) const {
  for (const Point& w : z_) {
    if (w != z && contains(*K_, L, w.vec())) return w;
  }
  throw Error(ErrorCode::InternalInconsistency, "line of P through z misses the rest of Z");
}

TPoint FanoModel::j(RulingPoint c, const TPoint& x) const {
  switch (x.kind) {
    case TKind::U: {
      const Line M = sigma(x.line, c);
      return from_residual(residual_line(nf_.f, span(*K_, x.line, M), x.line, M).line);
    }
    case TKind::Cz: {
      const RulingPoint d = ruling_of(x.line);
      if (d == conjugate(c)) return {TKind::Z, Line{}, x.z};
      if (d == c) return from_residual(residual_line(nf_.f, tangent_plane(x.z, x.line), x.line, x.line).line);
      const Line lc = tau(x.z, c);
      return from_residual(residual_line(nf_.f, span(*K_, lc, x.line), lc, x.line).line);
    }
    case TKind::Z: {
      const Line L = tau(x.z, conjugate(c));
      // tau_z(bar c) in P is the line zw of two nodes; it is contracted to w.
      if (in_plane_P(L)) return {TKind::Z, Line{}, other_z_on(L, x.z)};
      return {TKind::Cz, L, x.z};
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown torsor point kind");
}

std::vector<TPoint> FanoModel::torsor_points() const {
  std::vector<TPoint> out;
  for (const Line& L : disjoint_lines(nf_)) out.push_back({TKind::U, L, Point{}});
  for (const Point& z : z_) {
    for (const RulingPoint& c : curve_) {
      const Line L = tau(z, c);
      if (!in_plane_P(L)) out.push_back({TKind::Cz, L, z});
    }
    out.push_back({TKind::Z, Line{}, z});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TPoint FanoModel::map_up(const TPoint& x) const {
  const Embedding& e = Embedding::get(*K_, extension().K());
  TPoint y{x.kind, Line{}, Point{}};
  if (x.kind != TKind::Z) y.line = map_line(e, x.line);
  if (x.kind != TKind::U) y.z = map_point(e, x.z);
  return y;
}

std::optional<TPoint> FanoModel::restrict_down(const TPoint& x) const {
  const Embedding& e = Embedding::get(*K_, extension().K());
  TPoint y{x.kind, Line{}, Point{}};
  if (x.kind != TKind::Z) {
    const auto L = restrict_line(e, x.line);
    if (!L) return std::nullopt;
    y.line = *L;
  }
  if (x.kind != TKind::U) {
    const auto z = restrict_point(e, x.z);
    if (!z) return std::nullopt;
    y.z = *z;
  }
  return y;
}

std::vector<Line> fano_plane_lines(const FanoModel& m) {
  const Field& K = m.K();
  const HomogeneousForm A = m.threefold().conic0(), B = m.threefold().conic1();
  std::vector<Line> out;
  for_each_line(K, 2, [&](const Line& l) {
    const BinaryForm a = restrict_to_line(A, l), b = restrict_to_line(B, l);
    if (rank(K, {a.coeffs(), b.coeffs()}) <= 1) out.push_back(embed_plane_line(K, l));
  });
  return out;
}

bool FanoDecomposition::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SetCheck& c) { return c.pass; });
}

FanoDecomposition decompose(const FanoModel& m) {
  const Field& K = m.K();
  FanoDecomposition out;
  out.q = K.size();
  auto check = [&](const std::string& name, bool ok, const std::string& witness = {}) {
    out.checks.push_back({name, ok, ok ? std::string() : witness});
  };
  const unsigned k = K.degree() / m.base().degree();
  const auto lines = enumerate_fano(m.base_threefold(), k);
  std::set<Line> U, Fopen, Pstar;
  for (const auto& c : lines) {
    (c.tag == LineTag::InPlane ? Pstar : c.tag == LineTag::MeetsPlaneOnce ? Fopen : U).insert(c.line);
  }
  const auto fp = fano_plane_lines(m);
  const std::set<Line> FcapP(fp.begin(), fp.end());
  out.pstar = Pstar.size();
  out.u_interior = U.size();
  out.f_cap_pstar = FcapP.size();
  out.fcomponent = Fopen.size() + FcapP.size();
  check("pstar_count", out.pstar == K.size() * K.size() + K.size() + 1);
  check("f_cap_pstar_at_most_6", out.f_cap_pstar <= 6, std::to_string(out.f_cap_pstar) + " lines");

  std::set<Line> zstar, Cz, Cz_tau;
  for (const Point& z : m.z_points()) {
    for (const Line& L : Pstar)
      if (contains(K, L, z.vec())) zstar.insert(L);
    const auto cz = m.curve_of_lines(z);
    Cz.insert(cz.begin(), cz.end());
    std::set<Line> taus;
    for (const RulingPoint& c : m.curve_points()) taus.insert(m.tau(z, c));
    check("tau_injective", taus.size() == m.curve_points().size(), to_string(z));
    check("tau_onto_lines_through_z", taus == std::set<Line>(cz.begin(), cz.end()), to_string(z));
    Cz_tau.insert(taus.begin(), taus.end());
  }
  out.boundary_zstar = zstar.size();
  out.boundary_cz = Cz.size();
  std::set<Line> ubar = U;
  ubar.insert(zstar.begin(), zstar.end());
  ubar.insert(Cz.begin(), Cz.end());
  out.ubar = ubar.size();

  // Boundary law: a line meeting P once is in the closure of U iff it passes through Z.
  std::set<Line> through_z, cz_off_P;
  for (const auto& c : lines) {
    if (c.tag == LineTag::MeetsPlaneOnce && m.is_z(*c.meet)) through_z.insert(c.line);
  }
  for (const Line& L : Cz)
    if (!in_plane_P(L)) cz_off_P.insert(L);
  auto first_diff = [](const std::set<Line>& a, const std::set<Line>& b) {
    std::vector<Line> d;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
    return d.empty() ? std::string() : to_string(d[0]);
  };
  check("boundary_law", through_z == cz_off_P, first_diff(through_z, cz_off_P));

  std::set<Line> ubar_P, ubar_F;
  for (const Line& L : ubar) {
    if (Pstar.count(L)) ubar_P.insert(L);
    if (Fopen.count(L) || FcapP.count(L)) ubar_F.insert(L);
  }
  check("ubar_cap_pstar_is_pencils", ubar_P == zstar, first_diff(ubar_P, zstar));
  check("ubar_cap_f_is_cz", ubar_F == Cz, first_diff(ubar_F, Cz));

  std::set<Line> boundary = zstar;
  boundary.insert(Cz.begin(), Cz.end());
  check("ubar_inclusion_exclusion", out.ubar == U.size() + boundary.size());

  // psi_z lands in the closure of U; pairs {c, bar c} land in z*.
  for (const Point& z : m.z_points()) {
    const auto& C = m.curve_points();
    for (std::size_t a = 0; a < C.size(); ++a) {
      for (std::size_t b = a; b < C.size(); ++b) {
        std::optional<Line> L;
        try {
          L = m.psi(z, C[a], C[b]);
        } catch (const Error& e) {
          check("psi_defined", false, to_string(z) + " " + e.what());
          continue;
        }
        if (!L) continue;
        if (!ubar.count(*L)) check("psi_in_ubar", false, to_string(*L));
        if (C[b] == m.conjugate(C[a]) && !zstar.count(*L)) check("psi_conjugate_pair_in_zstar", false, to_string(*L));
      }
    }
    // Round trip psi_z(phi_z(L)) = L on every disjoint line.
    for (const Line& L : U) {
      const PhiResult ph = m.phi(z, L);
      const FanoModel& mm = ph.field == &K ? m : m.extension();
      const Point zz = ph.field == &K ? z : map_point(Embedding::get(K, mm.K()), z);
      const auto back = mm.psi(zz, ph.pair[0], ph.pair[1]);
      std::optional<Line> r;
      if (back) r = ph.field == &K ? back : restrict_line(Embedding::get(K, mm.K()), *back);
      if (!r || *r != L) check("psi_phi_round_trip", false, to_string(z) + " " + to_string(L));
    }
  }
  for (const char* name : {"psi_in_ubar", "psi_conjugate_pair_in_zstar", "psi_phi_round_trip", "psi_defined"}) {
    if (std::none_of(out.checks.begin(), out.checks.end(), [&](const SetCheck& c) { return c.name == name; })) {
      check(name, true);
    }
  }

  const auto T = m.torsor_points();
  out.torsor = T.size();
  check("torsor_set_identity", T.size() == U.size() + cz_off_P.size() + m.z_points().size());
  return out;
}

std::vector<Line> lines_meeting(const HomogeneousForm& f, const Subspace& S, const Line& X) {
  const Field& K = f.field();
  const Vec a = X.row(0), b = X.row(1);
  std::vector<Vec> comp;
  for (const Vec& r : S.rows) {
    Mat m{a, b};
    for (const Vec& c : comp) m.push_back(c);
    m.push_back(r);
    if (rank(K, m) == static_cast<int>(m.size())) comp.push_back(r);
    if (comp.size() == 2) break;
  }
  if (comp.size() != 2 || !contains(K, S, X)) throw Error(ErrorCode::InvalidInput, "line is not in the 3-space");
  const HomogeneousForm gamma = HomogeneousForm::linear(K, Vec{0, 0, 1});
  std::set<Line> out;
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const auto [l, m] = fiber_param(K, i);
    const std::vector<Vec> basis{a, b, axpy(K, l, comp[0], m, comp[1])};
    const auto h = divide_by_linear(restrict_to_basis(f, basis), gamma);
    if (!h) throw Error(ErrorCode::NotOnCubic, "line is not on the cubic surface");
    if (h->is_zero()) throw Error(ErrorCode::PlaneContained, "plane lies on the cubic surface");
    const Mat G = gram_matrix(*h);
    const int r = rank(K, G);
    if (r == 3) continue;
    if (r <= 1) throw Error(ErrorCode::Degenerate, "plane section with a double line");
    const Vec p = kernel(K, G, 3)[0];
    Vec e1, e2;
    const Mat units{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int u = 0; u < 3 && e1.empty(); ++u)
      for (int v = u + 1; v < 3 && e1.empty(); ++v)
        if (rank(K, {p, units[u], units[v]}) == 3) {
          e1 = units[u];
          e2 = units[v];
        }
    const Line ell = make_line(K, e1, e2);
    for (const auto& [root, mult] : restrict_to_line(*h, ell).projective_roots()) {
      const Vec y = axpy(K, root[0], e1, root[1], e2);
      const Line L = make_line(K, combine(K, basis, p), combine(K, basis, y));
      if (L != X) out.insert(L);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Line> cubic_surface_lines(const HomogeneousForm& f, const Subspace& S, const Line& seed) {
  std::set<Line> found{seed};
  std::deque<Line> queue{seed};
  while (!queue.empty()) {
    const Line X = queue.front();
    queue.pop_front();
    for (const Line& L : lines_meeting(f, S, X)) {
      if (found.insert(L).second) queue.push_back(L);
    }
    if (found.size() > 27) throw Error(ErrorCode::Degenerate, "more than 27 lines: the surface is not a smooth cubic");
  }
  return {found.begin(), found.end()};
}

SurfaceLines surface_lines(const NormalizedThreefold& nf, const Line& L, const Line& M) {
  const Field& F = nf.F();
  const Subspace S = span(F, L, M);
  if (S.rows.size() != 4) throw Error(ErrorCode::InvalidInput, "lines are not skew");
  Mat proj(2, Vec(4));
  for (int i = 0; i < 4; ++i) {
    proj[0][i] = S.rows[i][0];
    proj[1][i] = S.rows[i][1];
  }
  const Mat ker = kernel(F, proj, 4);
  if (ker.size() != 2) throw Error(ErrorCode::InvalidInput, "span(L, M) meets P in more than a line");
  const Line ell = make_line(F, combine(F, S.rows, ker[0]), combine(F, S.rows, ker[1]));
  SurfaceLines out;
  for (unsigned k = 1; k <= 4; ++k) {
    const Field& W = Field::get(F.characteristic(), F.degree() * k);
    const Embedding& e = Embedding::get(F, W);
    Mat rows = S.rows;
    for (auto& r : rows)
      for (auto& x : r) x = e(x);
    out.lines = cubic_surface_lines(nf.f.mapped(e), make_subspace(W, rows), map_line(e, L));
    out.L = map_line(e, L);
    out.M = map_line(e, M);
    out.ell = map_line(e, ell);
    if (out.lines.size() == 27) {
      out.depth = k;
      return out;
    }
  }
  return out;
}

bool IntersectionReport::pass() const {
  auto all = [](const std::vector<int>& v, int x) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [x](int y) { return y == x; });
  };
  return all(sigma_tau, 2) && all(sigma_sigma, 3) && all(tau_tau, 1) && all(surface_line_counts, 27);
}

IntersectionReport verify_intersection_numbers(const NormalizedThreefold& nf, int samples, Rng& rng) {
  const Field& F = nf.F();
  IntersectionReport rep;
  const auto U = disjoint_lines(nf);
  const SingularLocusZ Z = compute_Z(nf);
  if (U.size() < 2) return rep;

  // sigma_L . tau_z: lines through z meeting L, with the multiplicity of the residual pair.
  std::vector<const ZPoint*> low;
  for (const auto& z : Z.points)
    if (z.degree <= 2) low.push_back(&z);
  if (!low.empty()) {
    const unsigned deg = std::max_element(low.begin(), low.end(), [](auto a, auto b) { return a->degree < b->degree; })[0]->degree;
    const FanoModel model(nf, Field::get(F.characteristic(), F.degree() * deg));
    const Embedding& zdown = Embedding::get(model.K(), *Z.field);
    const Embedding& up = Embedding::get(F, model.K());
    for (int s = 0; s < samples; ++s) {
      const Point z = *restrict_point(zdown, low[rng.below(low.size())]->point);
      const Line L = map_line(up, U[rng.below(U.size())]);
      const PhiResult ph = model.phi(z, L);
      const Field& W = *ph.field;
      const Embedding& e = Embedding::get(model.K(), W);
      const Point zw = map_point(e, z);
      const HomogeneousForm fW = nf.f.mapped(Embedding::get(F, W));
      // Independent count of distinct lines zy, y on L, lying on Y.
      int distinct = 0;
      for (const Point& y : points_of_line(W, map_line(e, L))) distinct += vanishes_on_line(fW, line_through(W, zw, y));
      const int expected_distinct = ph.multiplicity == 2 ? 1 : 2;
      rep.sigma_tau.push_back(distinct == expected_distinct ? 2 : -distinct);
    }
  }

  // sigma_L . sigma_M and the 27 lines of span(L, M) cap Y.
  int attempts = 0;
  while (static_cast<int>(rep.sigma_sigma.size()) < samples && attempts < 20 * samples) {
    ++attempts;
    const Line& L = U[rng.below(U.size())];
    const Line& M = U[rng.below(U.size())];
    if (L == M || line_meets(F, L, M)) continue;
    SurfaceLines sl;
    try {
      sl = surface_lines(nf, L, M);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Degenerate && e.code() != ErrorCode::PlaneContained) throw;
      ++rep.resampled;
      continue;
    }
    if (sl.depth == 0) {
      ++rep.resampled;
      continue;
    }
    const Field& W = Field::get(F.characteristic(), F.degree() * sl.depth);
    bool incidence = true;
    for (const Line& a : sl.lines) {
      int meets = 0;
      for (const Line& b : sl.lines) meets += (a != b && line_meets(W, a, b));
      incidence = incidence && meets == 10;
    }
    int transversals = 0;
    for (const Line& N : sl.lines) {
      if (N == sl.L || N == sl.M || N == sl.ell) continue;
      transversals += line_meets(W, N, sl.L) && line_meets(W, N, sl.M) && line_meets(W, N, sl.ell);
    }
    rep.surface_line_counts.push_back(incidence ? static_cast<int>(sl.lines.size()) : -1);
    rep.split_depths.push_back(sl.depth);
    rep.sigma_sigma.push_back(transversals);
  }

  // tau_z . tau_w over the splitting field of Z.
  if (Z.points.size() >= 2) {
    const FanoModel model(nf, *Z.field);
    std::vector<std::set<Line>> curves;
    for (const auto& z : Z.points) {
      const auto c = model.curve_of_lines(z.point);
      curves.emplace_back(c.begin(), c.end());
    }
    for (int s = 0; s < samples; ++s) {
      const std::size_t a = rng.below(Z.points.size());
      std::size_t b = rng.below(Z.points.size() - 1);
      if (b >= a) ++b;
      std::vector<Line> common;
      std::set_intersection(curves[a].begin(), curves[a].end(), curves[b].begin(), curves[b].end(),
                            std::back_inserter(common));
      const bool is_join = common.size() == 1 && common[0] == line_through(*Z.field, Z.points[a].point, Z.points[b].point);
      rep.tau_tau.push_back(is_join ? 1 : static_cast<int>(common.size()) + (common.size() == 1 ? 100 : 0));
    }
  }
  return rep;
}

}  // namespace fanoscope
