#include "fanoscope/rationality.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <boost/multiprecision/miller_rabin.hpp>

#include "fanoscope/error.hpp"
#include "fanoscope/linalg.hpp"

namespace fanoscope {

namespace bmp = boost::multiprecision;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Rational: return "Rational";
    case Verdict::Irrational: return "Irrational";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

// ---------------------------------------------------------------- integers

namespace {

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

Int pollard_brent(const Int& n) {
  if (n % 2 == 0) return 2;
  for (Int c = 1;; ++c) {
    Int y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t m = 64;
    std::uint64_t r = 1;
    auto f = [&](const Int& v) { return Int((v * v + c) % n); };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = q * abs_int(x - y) % n;
        }
        g = bmp::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = bmp::gcd(abs_int(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  static std::mt19937 gen(12345);
  return bmp::miller_rabin_test(n, 25, gen);
}

void factor_into(Int n, std::map<Int, int>& out) {
  if (n < 2) return;
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

// Prime factorization of |n| (n != 0).
std::map<Int, int> factor(const Int& n) {
  std::map<Int, int> out;
  factor_into(abs_int(n), out);
  return out;
}

Int squarefree_part(const Int& n) {
  Int r = n < 0 ? -1 : 1;
  for (const auto& [p, e] : factor(n))
    if (e % 2) r *= p;
  return r;
}

std::vector<Int> divisors(const Int& n) {
  std::vector<Int> out{1};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t k = out.size();
    Int pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < k; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Int> exact_sqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  const Int r = bmp::sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

std::optional<Rat> rational_sqrt(const Rat& x) {
  const auto a = exact_sqrt(bmp::numerator(x)), b = exact_sqrt(bmp::denominator(x));
  if (!a || !b) return std::nullopt;
  return Rat(*a, *b);
}

int valuation(Int& n, const Int& p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int legendre(const Int& a, const Int& p) {
  Int r = a % p;
  if (r < 0) r += p;
  if (r == 0) return 0;
  return bmp::powm(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

long long lexrank(const Int& x) {
  if (x == 0) return 0;
  const long long a = static_cast<long long>(abs_int(x));
  return x > 0 ? 2 * a - 1 : 2 * a;
}

Int lcm_int(const Int& a, const Int& b) { return a / bmp::gcd(a, b) * b; }

Exponent drop_var(Exponent e, int var) {
  e[var] = 0;
  return e;
}

}  // namespace

int hilbert_symbol(const Int& a0, const Int& b0, const Int& p) {
  if (a0 == 0 || b0 == 0) throw Error(ErrorCode::InvalidInput, "Hilbert symbol of zero");
  Int u = a0, v = b0;
  const int alpha = valuation(u, p), beta = valuation(v, p);
  if (p == 2) {
    auto m8 = [](const Int& x) { return static_cast<int>(((x % 8) + 8) % 8); };
    const int um = m8(u), vm = m8(v);
    const int eu = ((um - 1) / 2) % 2, ev = ((vm - 1) / 2) % 2;
    const int wu = ((um * um - 1) / 8) % 2, wv = ((vm * vm - 1) / 8) % 2;
    return ((eu * ev + alpha * wv + beta * wu) % 2) ? -1 : 1;
  }
  int s = 1;
  if ((alpha * beta) % 2 && ((p - 1) / 2) % 2 == 1) s = -s;
  if (beta % 2) s *= legendre(u, p);
  if (alpha % 2) s *= legendre(v, p);
  return s;
}

// ------------------------------------------------------------ RationalForm

RationalForm RationalForm::variable(int nvars, int i) {
  RationalForm f(nvars, 1);
  Exponent e{};
  e[i] = 1;
  f.add_term(e, 1);
  return f;
}

RationalForm RationalForm::constant(int nvars, const Rat& c) {
  RationalForm f(nvars, 0);
  f.add_term(Exponent{}, c);
  return f;
}

void RationalForm::add_term(const Exponent& e, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rat RationalForm::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

Rat RationalForm::evaluate(const QVec& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error(ErrorCode::ArityError, "point size does not match the form");
  Rat s = 0;
  for (const auto& [e, c] : terms_) {
    Rat m = c;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    s += m;
  }
  return s;
}

Int RationalForm::evaluate(const ZVec& x) const {
  if (static_cast<int>(x.size()) != n_) throw Error(ErrorCode::ArityError, "point size does not match the form");
  Int s = 0;
  for (const auto& [e, c] : terms_) {
    if (bmp::denominator(c) != 1) throw Error(ErrorCode::InvalidInput, "integer evaluation of a non-integer form");
    Int m = bmp::numerator(c);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    s += m;
  }
  return s;
}

RationalForm RationalForm::partial(int i) const {
  RationalForm out(n_, std::max(d_ - 1, 0));
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    --f[i];
    out.add_term(f, c * e[i]);
  }
  return out;
}

RationalForm RationalForm::operator+(const RationalForm& o) const {
  RationalForm r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

RationalForm RationalForm::operator-(const RationalForm& o) const { return *this + o.scaled(-1); }

RationalForm RationalForm::operator*(const RationalForm& o) const {
  RationalForm r(n_, d_ + o.d_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e{};
      for (int i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  }
  return r;
}

RationalForm RationalForm::scaled(const Rat& s) const {
  RationalForm r(n_, d_);
  if (s == 0) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
  return r;
}

RationalForm RationalForm::substitute(const QMat& A) const {
  const int r = A.empty() ? 0 : static_cast<int>(A[0].size());
  std::vector<RationalForm> lin;
  for (int i = 0; i < n_; ++i) {
    RationalForm l(r, 1);
    for (int j = 0; j < r; ++j) {
      Exponent e{};
      e[j] = 1;
      l.add_term(e, A[i][j]);
    }
    lin.push_back(l);
  }
  RationalForm out(r, d_);
  for (const auto& [e, c] : terms_) {
    RationalForm m = constant(r, c);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < e[i]; ++k) m = m * lin[i];
    out = out + m;
  }
  return out;
}

RationalForm RationalForm::integer_primitive() const {
  if (terms_.empty()) return *this;
  Int l = 1, g = 0;
  for (const auto& [e, c] : terms_) l = lcm_int(l, bmp::denominator(c));
  for (const auto& [e, c] : terms_) g = bmp::gcd(g, bmp::numerator(Rat(c * l)));
  Rat s(l, g);
  if (terms_.rbegin()->second < 0) s = -s;
  return scaled(s);
}

HomogeneousForm RationalForm::reduce(const Field& Fp) const {
  if (Fp.degree() != 1) throw Error(ErrorCode::InvalidField, "reduction needs a prime field");
  const Int p = Fp.size();
  HomogeneousForm out(Fp, n_, d_);
  for (const auto& [e, c] : terms_) {
    const Int den = bmp::denominator(c) % p;
    if (den == 0) throw Error(ErrorCode::InvalidInput, "p divides a denominator");
    const Int num = ((bmp::numerator(c) % p) + p) % p;
    out.add_term(e, Fp.div(Fp.from_int(static_cast<long long>(num)), Fp.from_int(static_cast<long long>(den))));
  }
  return out;
}

QMat gram_matrix(const RationalForm& q) {
  const int n = q.num_vars();
  QMat M(n, QVec(n, 0));
  for (const auto& [e, c] : q.terms()) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < e[i]; ++k) idx.push_back(i);
    if (idx[0] == idx[1]) {
      M[idx[0]][idx[0]] += c;
    } else {
      M[idx[0]][idx[1]] += c / 2;
      M[idx[1]][idx[0]] += c / 2;
    }
  }
  return M;
}

Rat determinant(QMat M) {
  const std::size_t n = M.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && M[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(M[piv], M[c]);
      det = -det;
    }
    det *= M[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (M[r][c] == 0) continue;
      const Rat f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
    }
  }
  return det;
}

// --------------------------------------------------------------- vectors

ZVec primitive(const QVec& v) {
  Int l = 1, g = 0;
  for (const Rat& x : v) l = lcm_int(l, bmp::denominator(x));
  ZVec out;
  for (const Rat& x : v) out.push_back(bmp::numerator(Rat(x * l)));
  for (const Int& x : out) g = bmp::gcd(g, abs_int(x));
  if (g == 0) throw Error(ErrorCode::InvalidInput, "zero vector");
  const auto first = std::find_if(out.begin(), out.end(), [](const Int& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (Int& x : out) x /= g;
  return out;
}

namespace {

Int height(const ZVec& v) {
  Int h = 0;
  for (const Int& x : v) h = std::max(h, abs_int(x));
  return h;
}

bool lex_rank_less(const ZVec& a, const ZVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Int& x, const Int& y) { return lexrank(x) < lexrank(y); });
}

QVec to_q(const ZVec& v) { return QVec(v.begin(), v.end()); }

QVec mat_vec(const QMat& A, const QVec& v) {
  QVec out(A.size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += A[i][j] * v[j];
  return out;
}

}  // namespace

bool height_order(const ZVec& a, const ZVec& b) {
  const Int ha = height(a), hb = height(b);
  if (ha != hb) return ha < hb;
  return lex_rank_less(a, b);
}

std::string to_string(const ZVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ":" : "") + v[i].str();
  return s + ")";
}

// ------------------------------------------------------------ threefold

RationalThreefold normalize_rational(const RationalForm& cubic, const QMat& plane_rows) {
  if (cubic.num_vars() != 5 || cubic.degree() != 3) throw Error(ErrorCode::ArityError, "expected a cubic in 5 variables");
  if (plane_rows.size() != 3) throw Error(ErrorCode::ArityError, "expected 3 plane rows");
  QMat R = plane_rows;
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < 5 && row < R.size(); ++c) {
    std::size_t piv = row;
    while (piv < R.size() && R[piv][c] == 0) ++piv;
    if (piv == R.size()) continue;
    std::swap(R[piv], R[row]);
    const Rat inv = 1 / R[row][c];
    for (Rat& x : R[row]) x *= inv;
    for (std::size_t r = 0; r < R.size(); ++r) {
      if (r == row || R[r][c] == 0) continue;
      const Rat f = R[r][c];
      for (int k = 0; k < 5; ++k) R[r][k] -= f * R[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  if (pivots.size() != 3) throw Error(ErrorCode::InvalidInput, "plane rows are not independent");
  std::vector<QVec> cols;
  for (int c = 0; c < 5; ++c) {
    if (std::find(pivots.begin(), pivots.end(), c) != pivots.end()) continue;
    QVec e(5, 0);
    e[c] = 1;
    cols.push_back(e);
  }
  for (const QVec& r : R) cols.push_back(r);
  RationalThreefold y;
  y.change.assign(5, QVec(5, 0));
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) y.change[i][j] = cols[j][i];
  y.f = cubic.substitute(y.change);
  for (const auto& [e, c] : y.f.terms()) {
    if (e[0] == 0 && e[1] == 0) throw Error(ErrorCode::NotContained, "the plane does not lie on the cubic");
    Exponent d = e;
    if (e[0] > 0) {
      --d[0];
      y.Q0.add_term(d, c);
    } else {
      --d[1];
      y.Q1.add_term(d, c);
    }
  }
  return y;
}

RationalForm pencil_member(const RationalThreefold& y, const Int& s, const Int& t) {
  QMat A(5, QVec(4, 0));
  A[0][0] = Rat(s);
  A[1][0] = Rat(t);
  for (int i = 2; i < 5; ++i) A[i][i - 1] = 1;
  return y.Q0.substitute(A).scaled(Rat(s)) + y.Q1.substitute(A).scaled(Rat(t));
}

// ----------------------------------------------------------------- nodes

namespace {

// Rational roots (x : y) of sum_i c[i] x^(d-i) y^i, primitive, (1:0) included.
std::vector<ZVec> binary_rational_roots(std::vector<Int> c) {
  std::vector<ZVec> out;
  const int d = static_cast<int>(c.size()) - 1;
  if (std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; }))
    throw Error(ErrorCode::NotGeneral, "resultant vanishes identically");
  if (c[0] == 0) out.push_back({1, 0});
  // p(r) = sum_i c[i] r^(d-i) with r = x / y.
  int lo = 0, hi = d;
  while (c[lo] == 0) ++lo;
  if (c[hi] == 0) out.push_back({0, 1});
  while (c[hi] == 0) --hi;
  if (hi > lo) {
    const auto num = divisors(c[hi]), den = divisors(c[lo]);
    for (const Int& m : den) {
      for (const Int& n0 : num) {
        for (const Int& n : {n0, Int(-n0)}) {
          if (bmp::gcd(n, m) != 1) continue;
          // c[i] n^(hi-i) m^(i-lo) summed exactly.
          Int w = 0;
          for (int i = lo; i <= hi; ++i) {
            Int term = c[i];
            for (int k = 0; k < hi - i; ++k) term *= n;
            for (int k = 0; k < i - lo; ++k) term *= m;
            w += term;
          }
          if (w == 0) out.push_back(primitive({Rat(n), Rat(m)}));
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RationalForm w_part(const RationalForm& f, int w, int power, int degree) {
  RationalForm out(f.num_vars(), degree);
  for (const auto& [e, c] : f.terms())
    if (e[w] == power) out.add_term(drop_var(e, w), c);
  return out;
}

}  // namespace

std::vector<ZVec> rational_nodes(const RationalThreefold& y) {
  QMat toP(5, QVec(3, 0));
  for (int i = 0; i < 3; ++i) toP[i + 2][i] = 1;
  const RationalForm A = y.Q0.substitute(toP), B = y.Q1.substitute(toP);
  if (A.is_zero() || B.is_zero()) throw Error(ErrorCode::NotGeneral, "a restricted conic is zero");
  // Projection centre (a, b, 1) off A, in height order.
  QMat T;
  bool found = false;
  for (int h = 0; h <= 4 && !found; ++h) {
    for (int a = -h; a <= h && !found; ++a) {
      for (int b = -h; b <= h && !found; ++b) {
        if (std::max(std::abs(a), std::abs(b)) != h) continue;
        if (A.evaluate(QVec{Rat(a), Rat(b), Rat(1)}) == 0) continue;
        T = {{1, 0, Rat(a)}, {0, 1, Rat(b)}, {0, 0, 1}};
        found = true;
      }
    }
  }
  if (!found) throw Error(ErrorCode::InternalInconsistency, "no projection centre off the conic");
  const RationalForm A2 = A.substitute(T), B2 = B.substitute(T);
  Exponent ww{};
  ww[2] = 2;
  const Rat a2 = A2.coefficient(ww), b2 = B2.coefficient(ww);
  const RationalForm a1 = w_part(A2, 2, 1, 1), a0 = w_part(A2, 2, 0, 2);
  const RationalForm b1 = w_part(B2, 2, 1, 1), b0 = w_part(B2, 2, 0, 2);
  const RationalForm u = b0.scaled(a2) - a0.scaled(b2);
  const RationalForm res = u * u - (b1.scaled(a2) - a1.scaled(b2)) * (a1 * b0 - a0 * b1);
  const RationalForm ri = res.integer_primitive();
  std::vector<Int> c(5, 0);
  for (int i = 0; i <= 4; ++i) c[i] = bmp::numerator(ri.coefficient(make_exponent({4 - i, i, 0})));
  std::vector<ZVec> out;
  for (const ZVec& r : binary_rational_roots(c)) {
    const QVec xy{Rat(r[0]), Rat(r[1]), Rat(0)};
    const Rat l = a1.evaluate(xy), k = a0.evaluate(xy);
    const auto sq = rational_sqrt(l * l - 4 * a2 * k);
    if (!sq) continue;
    for (const Rat& s : {*sq, Rat(-*sq)}) {
      const QVec p{Rat(r[0]), Rat(r[1]), (-l + s) / (2 * a2)};
      if (A2.evaluate(p) != 0 || B2.evaluate(p) != 0) continue;
      out.push_back(primitive(mat_vec(T, p)));
    }
  }
  std::sort(out.begin(), out.end(), height_order);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ------------------------------------------------------------ line search

namespace {

template <class T>
struct FastForm {
  std::vector<std::pair<Exponent, T>> terms;
  int n = 5;

  explicit FastForm(const RationalForm& f) : n(f.num_vars()) {
    for (const auto& [e, c] : f.terms()) {
      if constexpr (std::is_same_v<T, Int>) {
        terms.emplace_back(e, bmp::numerator(c));
      } else {
        terms.emplace_back(e, static_cast<T>(static_cast<long long>(bmp::numerator(c))));
      }
    }
  }
  T eval(const T* x) const {
    T s = 0;
    for (const auto& [e, c] : terms) {
      T m = c;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) m *= x[i];
      s += m;
    }
    return s;
  }
};

template <class T>
T isqrt_exact(T D, bool& ok) {
  if (D < 0) {
    ok = false;
    return 0;
  }
  Int r = bmp::sqrt(Int(D));
  if constexpr (std::is_same_v<T, Int>) {
    ok = r * r == D;
    return r;
  } else {
    const T rt = static_cast<T>(static_cast<long long>(r));
    ok = rt * rt == D;
    return rt;
  }
}

// Points with x[fixed_zero] = 0, x[lead] in [1, H], the two free coordinates in
// [-H, H] and x4 solved from q = 0; primitive only.
template <class T>
std::vector<std::array<T, 5>> quadric_points(const FastForm<T>& q, int lead, int fixed_zero, int H) {
  std::vector<std::array<T, 5>> out;
  std::array<T, 5> x{};
  x[fixed_zero] = 0;
  auto g = [&](T a4) {
    x[4] = a4;
    return q.eval(x.data());
  };
  auto push = [&](T a4) {
    if (a4 < -H || a4 > H) return;
    x[4] = a4;
    long long gg = 0;
    for (int i = 0; i < 5; ++i) gg = std::gcd(gg, static_cast<long long>(x[i] < 0 ? -x[i] : x[i]));
    if (gg == 1) out.push_back(x);
  };
  for (int a = 1; a <= H; ++a) {
    for (int b = -H; b <= H; ++b) {
      for (int c = -H; c <= H; ++c) {
        x[lead] = a;
        x[2] = b;
        x[3] = c;
        const T g0 = g(0), gp = g(1), gm = g(-1);
        const T alpha = (gp + gm) / 2 - g0, beta = (gp - gm) / 2, gamma = g0;
        if (alpha == 0) {
          if (beta == 0) {
            if (gamma == 0)
              for (int t = -H; t <= H; ++t) push(t);
          } else if (gamma % beta == 0) {
            push(-gamma / beta);
          }
          continue;
        }
        bool ok = false;
        const T s = isqrt_exact<T>(beta * beta - 4 * alpha * gamma, ok);
        if (!ok) continue;
        for (const T& r : {T(-beta + s), T(-beta - s)}) {
          if (r % (2 * alpha) == 0) push(r / (2 * alpha));
          if (s == 0) break;
        }
      }
    }
  }
  return out;
}

template <class T>
std::optional<RationalLine> line_search_impl(const RationalThreefold& y, int H, std::uint64_t* checked) {
  const RationalForm fi = y.f.integer_primitive();
  const FastForm<T> q0(y.Q0.integer_primitive()), q1(y.Q1.integer_primitive());
  std::vector<FastForm<T>> grad;
  for (int i = 0; i < 5; ++i) grad.emplace_back(fi.partial(i));
  const auto As = quadric_points<T>(q0, 0, 1, H), Bs = quadric_points<T>(q1, 1, 0, H);
  auto to_z = [](const std::array<T, 5>& a) {
    ZVec v;
    for (const T& x : a) {
      if constexpr (std::is_same_v<T, Int>) {
        v.push_back(x);
      } else {
        v.push_back(Int(static_cast<long long>(x)));
      }
    }
    return v;
  };
  std::vector<std::array<T, 5>> gB;
  for (const auto& b : Bs) {
    std::array<T, 5> g{};
    for (int i = 0; i < 5; ++i) g[i] = grad[i].eval(b.data());
    gB.push_back(g);
  }
  std::optional<RationalLine> best;
  std::uint64_t n = 0;
  for (const auto& a : As) {
    std::array<T, 5> gA{};
    for (int i = 0; i < 5; ++i) gA[i] = grad[i].eval(a.data());
    for (std::size_t k = 0; k < Bs.size(); ++k) {
      ++n;
      const auto& b = Bs[k];
      T s1 = 0, s2 = 0;
      for (int i = 0; i < 5; ++i) {
        s1 += gA[i] * b[i];
        s2 += gB[k][i] * a[i];
      }
      if (s1 != 0 || s2 != 0) continue;
      RationalLine cand{to_z(a), to_z(b)};
      if (!best) {
        best = cand;
        continue;
      }
      const Int hc = std::max(height(cand.A), height(cand.B)), hb = std::max(height(best->A), height(best->B));
      if (hc < hb || (hc == hb && (lex_rank_less(cand.A, best->A) ||
                                   (cand.A == best->A && lex_rank_less(cand.B, best->B)))))
        best = cand;
    }
  }
  if (checked) *checked = n;
  return best;
}

}  // namespace

std::optional<RationalLine> search_rational_line(const RationalThreefold& y, int bound, std::uint64_t* checked) {
  Int cmax = 0;
  for (const RationalForm* f : {&y.f, &y.Q0, &y.Q1}) {
    const RationalForm g = f->integer_primitive();
    for (const auto& [e, c] : g.terms()) cmax = std::max(cmax, abs_int(bmp::numerator(c)));
  }
  // Gradient values stay below 3 * #terms * cmax * bound^2; products with a
  // coordinate below 2^120 keep __int128 exact.
  if (cmax < (Int(1) << 40) && bound <= 1000) return line_search_impl<__int128>(y, bound, checked);
  return line_search_impl<Int>(y, bound, checked);
}

// ------------------------------------------------------ local solvability

std::string LocalSolvability::place_name() const {
  switch (place) {
    case Place::None: return "none";
    case Place::Real: return "R";
    case Place::Prime: return "Q_" + prime.str();
  }
  return "?";
}

namespace {

bool definite_by_minors(const QMat& M) {
  bool pos = true, neg = true;
  for (std::size_t k = 1; k <= M.size(); ++k) {
    QMat S(k, QVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) S[i][j] = M[i][j];
    const Rat d = determinant(S);
    pos = pos && d > 0;
    neg = neg && ((k % 2 == 1) ? d < 0 : d > 0);
  }
  return pos || neg;
}

// Number of primitive solutions of sum a_i x_i^2 = 0 modulo m = p^k.
std::uint64_t primitive_solutions(const ZVec& a, std::uint64_t p, std::uint64_t m) {
  std::vector<std::uint64_t> coef;
  for (const Int& x : a) coef.push_back(static_cast<std::uint64_t>(((x % Int(m)) + Int(m)) % Int(m)));
  auto count = [&](std::uint64_t step) {
    auto pair_hist = [&](std::uint64_t c1, std::uint64_t c2) {
      std::vector<std::uint64_t> h(m, 0);
      for (std::uint64_t x = 0; x < m; x += step) {
        const std::uint64_t v1 = c1 * (x * x % m) % m;
        for (std::uint64_t y = 0; y < m; y += step) h[(v1 + c2 * (y * y % m)) % m]++;
      }
      return h;
    };
    const auto h12 = pair_hist(coef[0], coef[1]), h34 = pair_hist(coef[2], coef[3]);
    std::uint64_t total = 0;
    for (std::uint64_t r = 0; r < m; ++r) total += h12[r] * h34[(m - r) % m];
    return total;
  };
  return count(1) - count(p);
}

// Primitive vectors of height <= h in Z^4: lowest height, then sparsest, then
// earliest support, then entries in the order 0, 1, -1, 2, ...
const std::vector<ZVec>& witness_candidates(int h) {
  static std::map<int, std::vector<ZVec>> cache;
  auto it = cache.find(h);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<std::vector<long long>, ZVec>> keyed;
  for (int x0 = -h; x0 <= h; ++x0)
    for (int x1 = -h; x1 <= h; ++x1)
      for (int x2 = -h; x2 <= h; ++x2)
        for (int x3 = -h; x3 <= h; ++x3) {
          const std::array<int, 4> x{x0, x1, x2, x3};
          int g = 0;
          for (int c : x) g = std::gcd(g, c);
          const auto first = std::find_if(x.begin(), x.end(), [](int c) { return c != 0; });
          if (g != 1 || *first < 0) continue;
          std::vector<long long> key{0, 0, 0};
          for (int i = 0; i < 4; ++i) {
            key[0] = std::max<long long>(key[0], std::abs(x[i]));
            if (x[i] != 0) {
              ++key[1];
              key[2] -= 1LL << (3 - i);
            }
          }
          ZVec v(x.begin(), x.end());
          for (const Int& c : v) key.push_back(lexrank(c));
          keyed.emplace_back(std::move(key), std::move(v));
        }
  std::sort(keyed.begin(), keyed.end());
  std::vector<ZVec> out;
  for (auto& [k, v] : keyed) out.push_back(std::move(v));
  return cache.emplace(h, std::move(out)).first->second;
}

}  // namespace

LocalSolvability local_solvability(const QMat& gram, int witness_height) {
  if (gram.size() != 4 || std::any_of(gram.begin(), gram.end(), [](const QVec& r) { return r.size() != 4; }))
    throw Error(ErrorCode::ArityError, "local_solvability expects a 4x4 form");
  if (determinant(gram) == 0) throw Error(ErrorCode::Degenerate, "singular quadratic form");
  LocalSolvability out;
  QMat M = gram;
  const std::size_t n = 4;
  for (std::size_t i = 0; i < n; ++i) {
    if (M[i][i] == 0) {
      std::size_t j = i + 1;
      while (j < n && M[j][j] == 0) ++j;
      if (j < n) {
        std::swap(M[i], M[j]);
        for (auto& r : M) std::swap(r[i], r[j]);
      } else {
        j = i + 1;
        while (j < n && M[i][j] == 0) ++j;
        if (j == n) throw Error(ErrorCode::Degenerate, "singular quadratic form");
        for (std::size_t k = 0; k < n; ++k) M[i][k] += M[j][k];
        for (std::size_t k = 0; k < n; ++k) M[k][i] += M[k][j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (M[j][i] == 0) continue;
      const Rat f = M[j][i] / M[i][i];
      for (std::size_t k = 0; k < n; ++k) M[j][k] -= f * M[i][k];
      for (std::size_t k = 0; k < n; ++k) M[k][j] -= f * M[k][i];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    out.diagonal.push_back(squarefree_part(bmp::numerator(M[i][i]) * bmp::denominator(M[i][i])));

  const auto& a = out.diagonal;
  const bool definite = std::all_of(a.begin(), a.end(), [](const Int& x) { return x > 0; }) ||
                        std::all_of(a.begin(), a.end(), [](const Int& x) { return x < 0; });
  if (definite) {
    out.solvable = false;
    out.place = Place::Real;
    out.rechecked = definite_by_minors(gram);
    out.recheck_method = "Sylvester leading principal minors";
    return out;
  }
  std::set<Int> primes{2};
  for (const Int& x : a)
    for (const auto& [p, e] : factor(x)) primes.insert(p);
  Int d = 1;
  for (const Int& x : a) d *= x;
  for (const Int& p : primes) {
    Int u = d;
    const int v = valuation(u, p);
    const bool square = v % 2 == 0 && (p == 2 ? ((u % 8) + 8) % 8 == 1 : legendre(u, p) == 1);
    int eps = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) eps *= hilbert_symbol(a[i], a[j], p);
    if (square && eps != hilbert_symbol(-1, -1, p)) {
      out.solvable = false;
      out.place = Place::Prime;
      out.prime = p;
      if (p <= 23) {
        const std::uint64_t pp = static_cast<std::uint64_t>(p);
        const std::uint64_t m = pp == 2 ? 64 : pp * pp * pp;
        out.rechecked = primitive_solutions(a, pp, m) == 0;
        out.recheck_method = "no primitive solution modulo " + std::to_string(m);
      } else {
        out.recheck_method = "prime too large for the residue search";
      }
      return out;
    }
  }
  if (witness_height > 0) {
    Int l = 1;
    for (const QVec& r : gram)
      for (const Rat& x : r) l = lcm_int(l, bmp::denominator(x));
    std::array<std::array<long long, 4>, 4> G{};
    bool small = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Int v = bmp::numerator(Rat(gram[i][j] * l));
        small = small && abs_int(v) < (Int(1) << 40);
        G[i][j] = small ? static_cast<long long>(v) : 0;
      }
    for (const ZVec& v : witness_candidates(witness_height)) {
      bool zero;
      if (small) {
        __int128 s = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            s += static_cast<__int128>(G[i][j]) * static_cast<long long>(v[i]) * static_cast<long long>(v[j]);
        zero = s == 0;
      } else {
        Rat s = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) s += gram[i][j] * Rat(v[i]) * Rat(v[j]);
        zero = s == 0;
      }
      if (zero) {
        out.witness = v;
        break;
      }
    }
  }
  return out;
}

// -------------------------------------------------------------- verdicts

RationalVerdict decide_over_rationals(const RationalForm& cubic, const QMat& plane_rows, const RationalityOptions& opt) {
  const RationalThreefold y = normalize_rational(cubic, plane_rows);
  RationalVerdict v;
  v.height_bound = opt.height_bound;
  for (std::uint32_t p : opt.primes) {
    if (p == 2) continue;
    try {
      const Field& Fp = Field::get(p);
      const NormalizedThreefold nf = from_quadrics(y.Q0.reduce(Fp), y.Q1.reduce(Fp));
      if (certify_generality(nf, 2).general()) {
        v.good_prime = p;
        break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidInput && e.code() != ErrorCode::NotGeneral) throw;
    }
  }
  if (v.good_prime == 0) throw Error(ErrorCode::NeedsDifferentPrime, "no scanned prime certifies generality");

  const auto nodes = rational_nodes(y);
  v.rational_nodes = nodes.size();
  if (!nodes.empty()) {
    v.verdict = Verdict::Rational;
    v.witness_kind = "node";
    v.node = nodes.front();
    v.node_ambient = primitive(mat_vec(y.change, QVec{0, 0, Rat(v.node[0]), Rat(v.node[1]), Rat(v.node[2])}));
    const QVec x = to_q(v.node_ambient);
    v.verified = true;
    for (int i = 0; i < 5; ++i) v.verified = v.verified && cubic.partial(i).evaluate(x) == 0;
    return v;
  }

  std::vector<ZVec> members;
  for (int s = 0; s <= opt.height_bound; ++s)
    for (int t = -opt.height_bound; t <= opt.height_bound; ++t)
      if (std::gcd(s, t) == 1 && (s > 0 || t == 1)) members.push_back({s, t});
  std::sort(members.begin(), members.end(), height_order);
  for (const ZVec& st : members) {
    ++v.members_scanned;
    const QMat G = gram_matrix(pencil_member(y, st[0], st[1]));
    if (determinant(G) == 0) continue;
    const LocalSolvability ls = local_solvability(G, 0);
    if (ls.solvable) continue;
    if (!ls.rechecked) {
      ++v.unconfirmed_obstructions;
      continue;
    }
    v.verdict = Verdict::Irrational;
    v.witness_kind = "pencil-member";
    v.member = {st[0], st[1]};
    v.obstruction = ls;
    v.verified = true;
    return v;
  }

  if (const auto L = search_rational_line(y, opt.height_bound, &v.line_pairs_checked)) {
    v.verdict = Verdict::Rational;
    v.witness_kind = "line";
    const QVec A = mat_vec(y.change, to_q(L->A)), B = mat_vec(y.change, to_q(L->B));
    v.line = {primitive(A), primitive(B)};
    v.verified = true;
    for (const auto& [s, t] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}}) {
      QVec x(5);
      for (int i = 0; i < 5; ++i) x[i] = s * A[i] + t * B[i];
      v.verified = v.verified && cubic.evaluate(x) == 0;
    }
    v.verified = v.verified && L->A[0] != 0 && L->A[1] == 0 && L->B[0] == 0 && L->B[1] != 0;
    return v;
  }
  v.witness_kind = "none";
  return v;
}

FiniteFieldVerdict decide_over_finite_field(const NormalizedThreefold& nf) {
  const Field& F = nf.F();
  FiniteFieldVerdict v;
  const auto grad = nf.f.gradient();
  const auto zs = z_points_over(nf, F);
  if (!zs.empty()) {
    v.witness = {TKind::Z, Line{}, zs.front()};
    const Vec x = zs.front().vec();
    v.verified = x[0] == 0 && x[1] == 0 &&
                 std::all_of(grad.begin(), grad.end(), [&](const HomogeneousForm& g) { return g.evaluate(x) == 0; });
    return v;
  }
  const auto lines = disjoint_lines(nf);
  if (!lines.empty()) {
    v.witness = {TKind::U, lines.front(), Point{}};
    const Line& L = lines.front();
    v.verified = vanishes_on_line(nf.f, L) && rank(F, {{L.at(0, 0), L.at(1, 0)}, {L.at(0, 1), L.at(1, 1)}}) == 2;
    return v;
  }
  const FanoModel m(nf, F);
  const auto T = m.torsor_points();
  if (T.empty()) throw Error(ErrorCode::InternalInconsistency, "no rational point of T over a finite field");
  v.witness = T.front();
  v.verified = vanishes_on_line(nf.f, T.front().line);
  return v;
}

}  // namespace fanoscope
