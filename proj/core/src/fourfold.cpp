#include "fanoscope/fourfold.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "fanoscope/error.hpp"
#include "fanoscope/fano.hpp"

namespace fanoscope {
namespace {

constexpr int kVars = 6;

void split3(const HomogeneousForm& f, std::array<HomogeneousForm, 3>& Q) {
  const Field& F = f.field();
  for (auto& q : Q) q = HomogeneousForm(F, kVars, 2);
  for (const auto& [e, v] : f.terms()) {
    int i = 0;
    while (i < 3 && e[i] == 0) ++i;
    if (i == 3) throw Error(ErrorCode::NotContained, "the plane is not on the cubic");
    Exponent r = e;
    r[i] -= 1;
    Q[i].add_term(r, v);
  }
}

HomogeneousForm sum_form(const NormalizedFourfold& nx) {
  const Field& F = nx.F();
  HomogeneousForm f(F, kVars, 3);
  for (int i = 0; i < 3; ++i) f = f + HomogeneousForm::variable(F, kVars, i) * nx.Q[i];
  return f;
}

Exponent monomial3(std::initializer_list<int> vars) {
  Exponent e{};
  for (int v : vars) e[v] += 1;
  return e;
}

// Symbolic fiber matrix: (0,0) cubic, (0,j) quadratic, (j,k) linear in (s,t,u).
std::vector<std::vector<HomogeneousForm>> pencil_entries(const NormalizedFourfold& nx) {
  const Field& F = nx.F();
  std::array<Mat, 3> G;
  for (int i = 0; i < 3; ++i) G[i] = gram_matrix(nx.Q[i]);
  std::vector<std::vector<HomogeneousForm>> M;
  for (int r = 0; r < 4; ++r) {
    std::vector<HomogeneousForm> row;
    for (int c = 0; c < 4; ++c) row.emplace_back(F, 3, r == 0 && c == 0 ? 3 : (r == 0 || c == 0 ? 2 : 1));
    M.push_back(std::move(row));
  }
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) M[0][0].add_term(monomial3({i, a, b}), G[i][a][b]);
    for (int j = 1; j < 4; ++j) {
      for (int a = 0; a < 3; ++a) M[0][j].add_term(monomial3({i, a}), G[i][a][j + 2]);
      for (int k = 1; k < 4; ++k) M[j][k].add_term(monomial3({i}), G[i][j + 2][k + 2]);
    }
  }
  for (int j = 1; j < 4; ++j) M[j][0] = M[0][j];
  return M;
}

HomogeneousForm discriminant_form(const NormalizedFourfold& nx) {
  const auto M = pencil_entries(nx);
  HomogeneousForm det(nx.F(), 3, 6);
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) inversions += perm[a] > perm[b];
    HomogeneousForm term = M[0][perm[0]];
    for (int r = 1; r < 4; ++r) term = term * M[r][perm[r]];
    det = inversions % 2 ? det - term : det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (det.is_zero()) throw Error(ErrorCode::NotGeneral, "plane discriminant vanishes identically");
  return det;
}

bool in_plane(const Vec& x) { return x[0] == 0 && x[1] == 0 && x[2] == 0; }

Vec grad_at(const std::vector<HomogeneousForm>& grad, const Vec& x) {
  Vec g;
  for (const auto& d : grad) g.push_back(d.evaluate(x));
  return g;
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elt e) { return e == 0; });
}

// Resultant of two binary quadratics by the Sylvester determinant.
Elt resultant2(const Field& F, const BinaryForm& a, const BinaryForm& b) {
  Mat S(4, Vec(4, 0));
  for (int i = 0; i < 3; ++i) {
    S[0][i] = a.coeff(i);
    S[1][i + 1] = a.coeff(i);
    S[2][i] = b.coeff(i);
    S[3][i + 1] = b.coeff(i);
  }
  return determinant(F, S);
}

// Degree of (b0 : b1 : b2) as a map P^1 -> P^2 for binary quadratics.
unsigned map_degree(const Field& F, const std::array<BinaryForm, 3>& b) {
  Mat rows;
  for (const auto& f : b) rows.push_back(f.coeffs());
  const int r = rref(F, rows);
  if (r <= 1) return 0;
  if (r == 3) return 2;
  const BinaryForm p(F, 2, rows[0]), q(F, 2, rows[1]);
  return resultant2(F, p, q) == 0 ? 1 : 2;
}

// Singular points of X over K: in P where Q0 = Q1 = Q2 = 0, and off P at
// vertices of singular fiber quadrics, where the full gradient is tested.
std::optional<Point> singular_point_over(const NormalizedFourfold& nxK) {
  const Field& K = nxK.F();
  const auto grad = nxK.f.gradient();
  std::optional<Point> found;
  for_each_point(K, 2, [&](const Point& p) {
    if (found) return;
    const Vec x{0, 0, 0, p[0], p[1], p[2]};
    if (std::all_of(nxK.Q.begin(), nxK.Q.end(), [&](const HomogeneousForm& q) { return q.evaluate(x) == 0; })) {
      found = make_point(K, x);
    }
  });
  if (found) return found;
  for_each_point(K, 2, [&](const Point& sigma) {
    if (found) return;
    const Mat M = fourfold_fiber_matrix(nxK, sigma.vec());
    const Mat ker = kernel(K, M, 4);
    if (ker.empty()) return;
    for_each_point(K, static_cast<int>(ker.size()) - 1, [&](const Point& c) {
      if (found) return;
      Vec w(4, 0);
      for (std::size_t r = 0; r < ker.size(); ++r) w = axpy(K, 1, w, c[static_cast<int>(r)], ker[r]);
      if (w[0] == 0) return;
      const Vec x{K.mul(sigma[0], w[0]), K.mul(sigma[1], w[0]), K.mul(sigma[2], w[0]), w[1], w[2], w[3]};
      if (is_zero_vec(grad_at(grad, x))) found = make_point(K, x);
    });
  });
  return found;
}

}  // namespace

NormalizedFourfold normalize_fourfold(const HomogeneousForm& cubic, const Subspace& plane) {
  if (cubic.num_vars() != kVars || cubic.degree() != 3) throw Error(ErrorCode::ArityError, "expected a cubic in 6 variables");
  if (plane.n != kVars || plane.rows.size() != 3) throw Error(ErrorCode::InvalidInput, "expected a plane in P^5");
  const Field& F = cubic.field();
  std::vector<int> pivots;
  for (const auto& row : plane.rows) {
    int c = 0;
    while (row[c] == 0) ++c;
    pivots.push_back(c);
  }
  Mat A(kVars, Vec(kVars, 0));
  int col = 0;
  for (int j = 0; j < kVars; ++j) {
    if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
    A[j][col++] = 1;
  }
  for (const auto& row : plane.rows) {
    for (int i = 0; i < kVars; ++i) A[i][col] = row[i];
    ++col;
  }
  NormalizedFourfold nx{&F, A, cubic.substitute(A), {HomogeneousForm(F, kVars, 2), HomogeneousForm(F, kVars, 2),
                                                      HomogeneousForm(F, kVars, 2)}};
  split3(nx.f, nx.Q);
  return nx;
}

NormalizedFourfold fourfold_from_quadrics(const HomogeneousForm& Q0, const HomogeneousForm& Q1, const HomogeneousForm& Q2) {
  const Field& F = Q0.field();
  NormalizedFourfold nx{&F, identity(kVars), HomogeneousForm(F, kVars, 3), {Q0, Q1, Q2}};
  nx.f = sum_form(nx);
  split3(nx.f, nx.Q);
  return nx;
}

NormalizedFourfold base_change(const NormalizedFourfold& nx, const Field& K) {
  const Embedding& e = Embedding::get(nx.F(), K);
  NormalizedFourfold out{&K, nx.change, nx.f.mapped(e), {nx.Q[0].mapped(e), nx.Q[1].mapped(e), nx.Q[2].mapped(e)}};
  for (auto& row : out.change)
    for (auto& v : row) v = e(v);
  return out;
}

NormalizedFourfold random_fourfold(const Field& F, Rng& rng) {
  const HomogeneousForm Q0 = random_form(F, kVars, 2, rng);
  const HomogeneousForm Q1 = random_form(F, kVars, 2, rng);
  const HomogeneousForm Q2 = random_form(F, kVars, 2, rng);
  return fourfold_from_quadrics(Q0, Q1, Q2);
}

Mat fourfold_fiber_matrix(const NormalizedFourfold& nx, const Vec& stu) {
  const Field& F = nx.F();
  if (stu.size() != 3 || is_zero_vec(stu)) throw Error(ErrorCode::Degenerate, "expected a point of P^2");
  HomogeneousForm R(F, kVars, 2);
  for (int i = 0; i < 3; ++i) R = R + nx.Q[i].scaled(stu[i]);
  std::vector<std::vector<Elt>> A(kVars, std::vector<Elt>(4, 0));
  for (int i = 0; i < 3; ++i) A[i][0] = stu[i];
  for (int j = 0; j < 3; ++j) A[3 + j][1 + j] = 1;
  return gram_matrix(R.substitute(A));
}

PlaneDiscriminant plane_discriminant(const NormalizedFourfold& nx, int scan_depth) {
  PlaneDiscriminant pd{discriminant_form(nx), 0, false, std::nullopt, 0};
  pd.scan_depth = std::max(scan_depth, 0);
  pd.smooth = true;
  const Field& F = nx.F();
  for (int k = 1; k <= pd.scan_depth && pd.smooth; ++k) {
    const Field& K = Field::get(F.characteristic(), F.degree() * k);
    const HomogeneousForm d = pd.delta.mapped(Embedding::get(F, K));
    const auto grad = d.gradient();
    for_each_point(K, 2, [&](const Point& p) {
      if (!pd.smooth) return;
      const Vec v = p.vec();
      if (d.evaluate(v) != 0 || !is_zero_vec(grad_at(grad, v))) return;
      pd.smooth = false;
      pd.singular_point = p;
      pd.singular_degree = static_cast<unsigned>(k);
    });
  }
  return pd;
}

BinaryForm restrict_discriminant(const NormalizedFourfold& nx, const HomogeneousForm& delta, const Point& dual) {
  const Mat basis = kernel(nx.F(), Mat{dual.vec()}, 3);
  std::vector<std::vector<Elt>> A(3, std::vector<Elt>(2));
  for (int i = 0; i < 3; ++i) {
    A[i][0] = basis[0][i];
    A[i][1] = basis[1][i];
  }
  const HomogeneousForm g = delta.substitute(A);
  BinaryForm b(nx.F(), 6);
  for (int i = 0; i <= 6; ++i) {
    Exponent e{};
    e[0] = static_cast<std::uint8_t>(6 - i);
    e[1] = static_cast<std::uint8_t>(i);
    b.set_coeff(i, g.coefficient(e));
  }
  return b;
}

Slice make_slice(const NormalizedFourfold& nx, const Point& dual) {
  const Field& F = nx.F();
  if (dual.n != 3) throw Error(ErrorCode::InvalidInput, "expected a dual point of P^2");
  const Mat basis = kernel(F, Mat{dual.vec()}, 3);
  Mat embed(kVars, Vec(5, 0));
  for (int i = 0; i < 3; ++i) {
    embed[i][0] = basis[0][i];
    embed[i][1] = basis[1][i];
  }
  for (int j = 0; j < 3; ++j) embed[3 + j][2 + j] = 1;
  Mat plane(3, Vec(5, 0));
  for (int j = 0; j < 3; ++j) plane[j][2 + j] = 1;
  NormalizedThreefold nf = normalize(nx.f.substitute(embed), make_subspace(F, plane));
  return Slice{dual, {basis[0], basis[1]}, std::move(embed), std::move(nf)};
}

Vec slice_to_ambient(const Slice& s, const Vec& y) { return apply(s.nf.F(), s.embed, y); }

Vec ambient_to_slice(const Slice& s, const Vec& x) {
  const Field& F = s.nf.F();
  const Vec head(x.begin(), x.begin() + 3);
  if (dot(F, s.dual.vec(), head) != 0) throw Error(ErrorCode::InvalidInput, "point is not on the slice hyperplane");
  const auto& [k0, k1] = s.basis;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Elt det = F.sub(F.mul(k0[i], k1[j]), F.mul(k0[j], k1[i]));
      if (det == 0) continue;
      const Elt y0 = F.div(F.sub(F.mul(head[i], k1[j]), F.mul(head[j], k1[i])), det);
      const Elt y1 = F.div(F.sub(F.mul(k0[i], head[j]), F.mul(k0[j], head[i])), det);
      return {y0, y1, x[3], x[4], x[5]};
    }
  }
  throw Error(ErrorCode::InternalInconsistency, "slice basis is degenerate");
}

Point tangency_map(const NormalizedFourfold& nx, const Vec& x) {
  if (x.size() != kVars || !in_plane(x)) throw Error(ErrorCode::InvalidInput, "tangency map needs a point of P");
  // On P the gradient of f is (Q0, Q1, Q2, 0, 0, 0).
  const Vec g{nx.Q[0].evaluate(x), nx.Q[1].evaluate(x), nx.Q[2].evaluate(x)};
  if (is_zero_vec(g)) throw Error(ErrorCode::SingularFourfold, "X is singular at a point of P");
  return make_point(nx.F(), g);
}

PiValue pi_of_line(const NormalizedFourfold& nx, const Line& L) {
  const Field& F = nx.F();
  if (L.n != kVars || !vanishes_on_line(nx.f, L)) throw Error(ErrorCode::InvalidInput, "line is not on X");
  const Vec r0 = L.row(0), r1 = L.row(1);
  const Vec b0(r0.begin(), r0.begin() + 3), b1(r1.begin(), r1.begin() + 3);
  PiValue out;
  const int r = rank(F, Mat{b0, b1});
  if (r == 2) {
    out.value = make_point(F, cross(F, b0, b1));
    return out;
  }
  if (r == 1) {
    Vec x;
    if (is_zero_vec(b0)) {
      x = r0;
    } else {
      int i = 0;
      while (b0[i] == 0) ++i;
      x = axpy(F, 1, r1, F.neg(F.div(b1[i], b0[i])), r0);
    }
    out.meet = make_point(F, x);
    out.value = tangency_map(nx, x);
    return out;
  }
  out.indeterminate = true;
  out.pencil_degree = map_degree(F, {restrict_to_line(nx.Q[0], L), restrict_to_line(nx.Q[1], L), restrict_to_line(nx.Q[2], L)});
  std::set<Point> image;
  for (const Point& x : points_of_line(F, L)) image.insert(tangency_map(nx, x.vec()));
  out.pencil.assign(image.begin(), image.end());
  return out;
}

std::vector<Line> fourfold_lines(const NormalizedFourfold& nx) {
  std::vector<Line> out;
  for_each_line(nx.F(), 5, [&](const Line& L) {
    if (vanishes_on_line(nx.f, L)) out.push_back(L);
  });
  return out;
}

FourfoldCertificate certify_fourfold(const NormalizedFourfold& nx, int smooth_depth, int disc_depth) {
  FourfoldCertificate cert;
  cert.smooth_scan_depth = std::clamp(smooth_depth, 1, 2);
  cert.smooth = true;
  const Field& F = nx.F();
  for (int k = 1; k <= cert.smooth_scan_depth && cert.smooth; ++k) {
    const Field& K = Field::get(F.characteristic(), F.degree() * k);
    if (const auto p = singular_point_over(k == 1 ? nx : base_change(nx, K))) {
      cert.smooth = false;
      cert.detail = "singular point " + to_string(*p) + " over F_" + std::to_string(K.size());
    }
  }
  try {
    cert.disc = plane_discriminant(nx, disc_depth);
    if (!cert.disc->smooth && cert.detail.empty()) {
      cert.detail = "discriminant singular at " + to_string(*cert.disc->singular_point) + " over degree " +
                    std::to_string(cert.disc->singular_degree);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotGeneral) throw;
    if (cert.detail.empty()) cert.detail = e.what();
  }
  return cert;
}

NormalizedFourfold sample_general_fourfold(const Field& F, Rng& rng, int max_attempts) {
  for (int i = 0; i < max_attempts; ++i) {
    NormalizedFourfold nx = random_fourfold(F, rng);
    if (certify_fourfold(nx).general()) return nx;
  }
  throw Error(ErrorCode::InternalInconsistency, "no general fourfold within the attempt budget");
}

namespace {

FiberReport scan_one(const NormalizedFourfold& nx, const HomogeneousForm& delta, const Point& dual,
                     const FiberScanOptions& opt, std::uint64_t seed) {
  FiberReport rep;
  rep.dual = dual;
  const BinaryForm restricted = restrict_discriminant(nx, delta, dual);
  if (restricted.is_zero()) {
    rep.degeneration = "line is a component of the discriminant";
    return rep;
  }
  if (!restricted.is_reduced()) {
    rep.degeneration = "discriminant restriction has a repeated root";
    return rep;
  }
  rep.transverse = true;
  try {
    const Slice s = make_slice(nx, dual);
    rep.sliced = true;
    rep.cert = certify_generality(s.nf, opt.generality_depth);
    if (!rep.cert.general()) {
      rep.error = "slice not general: " + rep.cert.detail;
      return rep;
    }
    rep.zeta = zeta(HyperellipticModel{discriminant(s.nf)});
    const FanoModel m(s.nf, s.nf.F());
    rep.torsor_count = static_cast<std::int64_t>(m.torsor_points().size());
    rep.equal = rep.torsor_count == rep.zeta.h;
    if (opt.extension_count) {
      rep.torsor_count2 = static_cast<std::int64_t>(m.extension().torsor_points().size());
      rep.equal = rep.equal && rep.torsor_count2 == rep.zeta.h2;
    }
    if (opt.axiom_trials > 0 && rep.cert.Z_reduced) {
      const TorsorGroup g(m);
      Rng rng(seed);
      rep.axioms = verify_group_axioms(g, AxiomBudget{opt.axiom_trials, std::min(opt.axiom_trials, 10)}, rng);
    }
  } catch (const Error& e) {
    rep.error = e.what();
  }
  return rep;
}

}  // namespace

std::vector<FiberReport> fiber_scan(const NormalizedFourfold& nx, const std::vector<Point>& duals,
                                    const FiberScanOptions& opt) {
  const HomogeneousForm delta = discriminant_form(nx);
  std::vector<FiberReport> out(duals.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < duals.size(); i = next++) {
      out[i] = scan_one(nx, delta, duals[i], opt, opt.seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    }
  };
  const int threads = std::clamp(opt.threads, 1, static_cast<int>(std::max<std::size_t>(duals.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::string fiber_scan_csv(const std::vector<FiberReport>& reports) {
  std::string s = "dual,transverse,N1,N2,h,T,equal\n";
  for (const auto& r : reports) {
    const bool counted = r.torsor_count >= 0;
    s += to_string(r.dual) + "," + (r.transverse ? "1" : "0") + ",";
    s += counted ? std::to_string(r.zeta.N1) + "," + std::to_string(r.zeta.N2) + "," + std::to_string(r.zeta.h) + "," +
                       std::to_string(r.torsor_count)
                 : std::string(",,,");
    s += std::string(",") + (r.equal ? "1" : "0") + "\n";
  }
  return s;
}

}  // namespace fanoscope
