#include "fanoscope/forms.hpp"

#include <algorithm>

#include "fanoscope/error.hpp"

namespace fanoscope {

UPoly::UPoly(const Field& F, std::vector<Elt> coeffs) : F_(&F), c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Elt UPoly::evaluate(Elt x) const {
  Elt v = 0;
  for (std::size_t i = c_.size(); i-- > 0;) v = F_->add(F_->mul(v, x), c_[i]);
  return v;
}

UPoly UPoly::derivative() const {
  std::vector<Elt> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(F_->mul(F_->from_int(static_cast<long long>(i)), c_[i]));
  return UPoly(*F_, std::move(d));
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  return scaled(F_->inv(c_.back()));
}

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<Elt> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->add((*this)[i], o[i]);
  return UPoly(*F_, std::move(r));
}

UPoly UPoly::operator-(const UPoly& o) const {
  std::vector<Elt> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->sub((*this)[i], o[i]);
  return UPoly(*F_, std::move(r));
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (c_.empty() || o.c_.empty()) return UPoly(*F_);
  std::vector<Elt> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = F_->add(r[i + j], F_->mul(c_[i], o.c_[j]));
  }
  return UPoly(*F_, std::move(r));
}

UPoly UPoly::scaled(Elt s) const {
  std::vector<Elt> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = F_->mul(c_[i], s);
  return UPoly(*F_, std::move(r));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& d) const {
  if (d.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  std::vector<Elt> rem = c_;
  const int dd = d.degree();
  std::vector<Elt> quo(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0, 0);
  const Elt li = F_->inv(d.lead());
  for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
    if (rem[i] == 0) continue;
    const Elt c = F_->mul(rem[i], li);
    quo[i - dd] = c;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] = F_->sub(rem[i - dd + j], F_->mul(c, d.c_[j]));
  }
  return {UPoly(*F_, std::move(quo)), UPoly(*F_, std::move(rem))};
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::pair<Elt, int>> roots_with_multiplicity(const UPoly& f) {
  std::vector<std::pair<Elt, int>> out;
  if (f.degree() <= 0) return out;
  const Field& F = f.field();
  UPoly rest = f;
  for (Elt x = 0; x < F.size() && rest.degree() > 0; ++x) {
    if (rest.evaluate(x) != 0) continue;
    int m = 0;
    const UPoly lin(F, {F.neg(x), 1});
    while (rest.degree() > 0 && rest.evaluate(x) == 0) {
      rest = rest.divmod(lin).first;
      ++m;
    }
    out.emplace_back(x, m);
  }
  return out;
}

BinaryForm::BinaryForm(const Field& F, int degree) : F_(&F), d_(degree), c_(degree + 1, 0) {}

BinaryForm::BinaryForm(const Field& F, int degree, std::vector<Elt> coeffs) : F_(&F), d_(degree), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != d_ + 1) throw Error(ErrorCode::ArityError, "binary form needs degree+1 coefficients");
}

bool BinaryForm::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](Elt v) { return v == 0; });
}

Elt BinaryForm::evaluate(Elt s, Elt t) const {
  // Horner in the ratio, homogenized: sum c_i s^(d-i) t^i.
  Elt v = 0;
  Elt tp = 1;
  std::vector<Elt> spow(d_ + 1, 1);
  for (int i = 1; i <= d_; ++i) spow[i] = F_->mul(spow[i - 1], s);
  for (int i = 0; i <= d_; ++i) {
    v = F_->add(v, F_->mul(c_[i], F_->mul(spow[d_ - i], tp)));
    tp = F_->mul(tp, t);
  }
  return v;
}

BinaryForm BinaryForm::operator+(const BinaryForm& o) const {
  if (d_ != o.d_) throw Error(ErrorCode::ArityError, "degree mismatch");
  BinaryForm r(*F_, d_);
  for (int i = 0; i <= d_; ++i) r.c_[i] = F_->add(c_[i], o.c_[i]);
  return r;
}

BinaryForm BinaryForm::operator-(const BinaryForm& o) const {
  if (d_ != o.d_) throw Error(ErrorCode::ArityError, "degree mismatch");
  BinaryForm r(*F_, d_);
  for (int i = 0; i <= d_; ++i) r.c_[i] = F_->sub(c_[i], o.c_[i]);
  return r;
}

BinaryForm BinaryForm::operator*(const BinaryForm& o) const {
  BinaryForm r(*F_, d_ + o.d_);
  for (int i = 0; i <= d_; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j <= o.d_; ++j) r.c_[i + j] = F_->add(r.c_[i + j], F_->mul(c_[i], o.c_[j]));
  }
  return r;
}

BinaryForm BinaryForm::scaled(Elt s) const {
  BinaryForm r(*F_, d_);
  for (int i = 0; i <= d_; ++i) r.c_[i] = F_->mul(c_[i], s);
  return r;
}

BinaryForm BinaryForm::mapped(const Embedding& e) const {
  BinaryForm r(e.target(), d_);
  for (int i = 0; i <= d_; ++i) r.c_[i] = e(c_[i]);
  return r;
}

UPoly BinaryForm::dehomogenize() const {
  std::vector<Elt> g(d_ + 1);
  for (int i = 0; i <= d_; ++i) g[d_ - i] = c_[i];
  return UPoly(*F_, std::move(g));
}

std::vector<std::pair<std::array<Elt, 2>, int>> BinaryForm::projective_roots() const {
  if (is_zero()) throw Error(ErrorCode::Degenerate, "roots of the zero binary form");
  std::vector<std::pair<std::array<Elt, 2>, int>> out;
  const UPoly g = dehomogenize();
  for (auto [x, m] : roots_with_multiplicity(g)) out.push_back({{x, 1}, m});
  const int at_inf = d_ - g.degree();
  if (at_inf > 0) out.push_back({{1, 0}, at_inf});
  return out;
}

bool BinaryForm::is_reduced() const {
  if (is_zero()) return false;
  const UPoly g = dehomogenize();
  if (d_ - g.degree() > 1) return false;
  if (g.degree() <= 0) return true;
  return gcd(g, g.derivative()).degree() == 0;
}

bool BinaryForm::projectively_equal(const BinaryForm& o) const {
  if (d_ != o.d_ || F_ != o.F_) return false;
  int i = 0;
  while (i <= d_ && c_[i] == 0) ++i;
  int j = 0;
  while (j <= d_ && o.c_[j] == 0) ++j;
  if (i != j) return false;
  if (i > d_) return true;
  const Elt ratio = F_->div(o.c_[i], c_[i]);
  for (int k = 0; k <= d_; ++k) {
    if (F_->mul(c_[k], ratio) != o.c_[k]) return false;
  }
  return true;
}

Exponent make_exponent(std::initializer_list<int> e) {
  if (e.size() > kMaxVars) throw Error(ErrorCode::ArityError, "too many variables");
  Exponent out{};
  std::size_t i = 0;
  for (int v : e) out[i++] = static_cast<std::uint8_t>(v);
  return out;
}

HomogeneousForm::HomogeneousForm(const Field& F, int nvars, int degree) : F_(&F), n_(nvars), d_(degree) {
  if (nvars < 1 || nvars > kMaxVars) throw Error(ErrorCode::ArityError, "unsupported number of variables");
  if (degree < 0) throw Error(ErrorCode::ArityError, "negative degree");
}

HomogeneousForm HomogeneousForm::variable(const Field& F, int nvars, int i) {
  HomogeneousForm f(F, nvars, 1);
  Exponent e{};
  e[i] = 1;
  f.add_term(e, 1);
  return f;
}

HomogeneousForm HomogeneousForm::constant(const Field& F, int nvars, Elt c) {
  HomogeneousForm f(F, nvars, 0);
  f.add_term(Exponent{}, c);
  return f;
}

HomogeneousForm HomogeneousForm::linear(const Field& F, std::span<const Elt> coeffs) {
  HomogeneousForm f(F, static_cast<int>(coeffs.size()), 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Exponent e{};
    e[i] = 1;
    f.add_term(e, coeffs[i]);
  }
  return f;
}

void HomogeneousForm::add_term(const Exponent& e, Elt c) {
  int sum = 0;
  for (int i = 0; i < kMaxVars; ++i) {
    if (i >= n_ && e[i] != 0) throw Error(ErrorCode::ArityError, "exponent uses a variable out of range");
    sum += e[i];
  }
  if (sum != d_) throw Error(ErrorCode::ArityError, "exponent vector does not sum to the degree");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second = F_->add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

Elt HomogeneousForm::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

Elt HomogeneousForm::evaluate(std::span<const Elt> point) const {
  if (static_cast<int>(point.size()) != n_) throw Error(ErrorCode::ArityError, "point length differs from the number of variables");
  std::array<std::array<Elt, 16>, kMaxVars> pw{};
  for (int i = 0; i < n_; ++i) {
    pw[i][0] = 1;
    for (int j = 1; j <= d_ && j < 16; ++j) pw[i][j] = F_->mul(pw[i][j - 1], point[i]);
  }
  Elt v = 0;
  for (const auto& [e, c] : terms_) {
    Elt m = c;
    for (int i = 0; i < n_ && m != 0; ++i) {
      if (e[i]) m = F_->mul(m, d_ < 16 ? pw[i][e[i]] : F_->pow(point[i], e[i]));
    }
    v = F_->add(v, m);
  }
  return v;
}

HomogeneousForm HomogeneousForm::partial(int i) const {
  HomogeneousForm r(*F_, n_, d_ > 0 ? d_ - 1 : 0);
  if (d_ == 0) return r;
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    f[i] -= 1;
    r.add_term(f, F_->mul(c, F_->from_int(e[i])));
  }
  return r;
}

std::vector<HomogeneousForm> HomogeneousForm::gradient() const {
  std::vector<HomogeneousForm> g;
  g.reserve(n_);
  for (int i = 0; i < n_; ++i) g.push_back(partial(i));
  return g;
}

HomogeneousForm HomogeneousForm::substitute(const std::vector<std::vector<Elt>>& A) const {
  if (static_cast<int>(A.size()) != n_) throw Error(ErrorCode::ArityError, "substitution matrix needs one row per variable");
  const int r = A.empty() ? 0 : static_cast<int>(A[0].size());
  std::vector<HomogeneousForm> lin;
  lin.reserve(n_);
  for (int i = 0; i < n_; ++i) lin.push_back(HomogeneousForm::linear(*F_, A[i]));
  HomogeneousForm out(*F_, r, d_);
  for (const auto& [e, c] : terms_) {
    HomogeneousForm prod = HomogeneousForm::constant(*F_, r, c);
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < e[i]; ++k) prod = prod * lin[i];
    }
    out = out + prod;
  }
  return out;
}

HomogeneousForm HomogeneousForm::mapped(const Embedding& emb) const {
  HomogeneousForm r(emb.target(), n_, d_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, emb(c));
  return r;
}

HomogeneousForm HomogeneousForm::operator+(const HomogeneousForm& o) const {
  if (n_ != o.n_ || d_ != o.d_) throw Error(ErrorCode::ArityError, "form shape mismatch");
  HomogeneousForm r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

HomogeneousForm HomogeneousForm::operator-(const HomogeneousForm& o) const { return *this + o.scaled(F_->neg(1)); }

HomogeneousForm HomogeneousForm::operator*(const HomogeneousForm& o) const {
  if (n_ != o.n_) throw Error(ErrorCode::ArityError, "form shape mismatch");
  HomogeneousForm r(*F_, n_, d_ + o.d_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e{};
      for (int i = 0; i < kMaxVars; ++i) e[i] = static_cast<std::uint8_t>(e1[i] + e2[i]);
      r.add_term(e, F_->mul(c1, c2));
    }
  }
  return r;
}

HomogeneousForm HomogeneousForm::scaled(Elt s) const {
  HomogeneousForm r(*F_, n_, d_);
  if (s == 0) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, F_->mul(c, s));
  return r;
}

std::vector<std::vector<Elt>> gram_matrix(const HomogeneousForm& q) {
  if (q.degree() != 2) throw Error(ErrorCode::ArityError, "Gram matrix needs a quadratic form");
  const Field& F = q.field();
  const int n = q.num_vars();
  const Elt half = F.inv(2);
  std::vector<std::vector<Elt>> M(n, std::vector<Elt>(n, 0));
  for (const auto& [e, c] : q.terms()) {
    int a = -1, b = -1;
    for (int i = 0; i < n; ++i) {
      if (e[i] == 2) a = b = i;
      if (e[i] == 1) (a < 0 ? a : b) = i;
    }
    if (a == b) {
      M[a][a] = c;
    } else {
      M[a][b] = M[b][a] = F.mul(c, half);
    }
  }
  return M;
}

HomogeneousForm quadratic_from_gram(const Field& F, const std::vector<std::vector<Elt>>& M) {
  const int n = static_cast<int>(M.size());
  HomogeneousForm q(F, n, 2);
  for (int i = 0; i < n; ++i) {
    Exponent e{};
    e[i] = 2;
    q.add_term(e, M[i][i]);
    for (int j = i + 1; j < n; ++j) {
      Exponent f{};
      f[i] = 1;
      f[j] = 1;
      q.add_term(f, F.add(M[i][j], M[j][i]));
    }
  }
  return q;
}

}  // namespace fanoscope
