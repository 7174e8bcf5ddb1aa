#include "fanoscope/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "fanoscope/error.hpp"

namespace fanoscope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::CharacteristicTwo: return "CharacteristicTwo";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::NotGeneral: return "NotGeneral";
    case ErrorCode::PlaneContained: return "PlaneContained";
    case ErrorCode::NotOnCubic: return "NotOnCubic";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::NeedsExtension: return "NeedsExtension";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ResampleRequired: return "ResampleRequired";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::SingularFourfold: return "SingularFourfold";
    case ErrorCode::NeedsDifferentPrime: return "NeedsDifferentPrime";
    case ErrorCode::NonreducedZ: return "NonreducedZ";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace {

constexpr std::uint64_t kMaxFieldSize = 1u << 21;

// Dense polynomials over F_p, index = degree.
using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo the monic-or-not polynomial m (m nonzero).
Poly poly_rem(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::size_t shift = a.size() - m.size();
    const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
  }
  return poly_rem(std::move(r), m, p);
}

Poly poly_powmod(Poly b, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly r{1};
  r = poly_rem(r, m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, b, m, p);
    b = poly_mulmod(b, b, m, p);
    e >>= 1;
  }
  return r;
}

Poly digits(std::uint64_t code, std::uint32_t p, unsigned k) {
  Poly d(k, 0);
  for (unsigned i = 0; i < k; ++i) {
    d[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return d;
}

std::uint32_t encode(const Poly& a, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

bool irreducible(const Poly& m, std::uint32_t p) {
  const unsigned k = static_cast<unsigned>(m.size() - 1);
  for (unsigned d = 1; d <= k / 2; ++d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly f = digits(c, p, d);
      f.push_back(1);
      if (poly_rem(m, f, p).empty()) return false;
    }
  }
  return true;
}

// Codes run with a_{k-1} as the most significant digit, so the first hit is
// the lexicographically smallest modulus read from the top coefficient down.
Poly smallest_irreducible(std::uint32_t p, unsigned k) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < k; ++i) count *= p;
  for (std::uint64_t c = 0; c < count; ++c) {
    Poly m = digits(c, p, k);
    m.push_back(1);
    if (irreducible(m, p)) return m;
  }
  throw Error(ErrorCode::InvalidField, "no irreducible polynomial found");
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

Field::Field(std::uint32_t p, unsigned k) : p_(p), k_(k), q_(1) {
  for (unsigned i = 0; i < k; ++i) q_ *= p;
  Poly m = smallest_irreducible(p, k);
  modulus_.assign(m.begin(), m.end() - 1);

  const std::uint64_t order = q_ - 1;
  const auto factors = prime_factors(order);
  Poly gen;
  for (std::uint32_t c = 1; c < q_; ++c) {
    Poly g = digits(c, p, k);
    trim(g);
    bool primitive = true;
    for (auto r : factors) {
      Poly t = poly_powmod(g, order / r, m, p);
      if (t.size() == 1 && t[0] == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      gen = g;
      break;
    }
  }
  if (q_ == 2) gen = {1};

  log_.assign(q_, 0);
  exp_.assign(2 * static_cast<std::size_t>(q_ - 1), 0);
  Poly e{1};
  for (std::uint32_t i = 0; i < q_ - 1; ++i) {
    Poly padded = e;
    padded.resize(k, 0);
    const std::uint32_t code = encode(padded, p);
    exp_[i] = code;
    exp_[i + q_ - 1] = code;
    log_[code] = i;
    e = poly_mulmod(e, gen, m, p);
  }

  zech_.assign(q_ - 1, kNone);
  for (std::uint32_t d = 0; d < q_ - 1; ++d) {
    const std::uint32_t c = exp_[d];
    const std::uint32_t c0 = c % p;
    const std::uint32_t shifted = c - c0 + (c0 + 1) % p;
    zech_[d] = shifted == 0 ? kNone : log_[shifted];
  }
}

const Field& Field::get(std::uint32_t p, unsigned degree) {
  if (p == 2) throw Error(ErrorCode::CharacteristicTwo, "characteristic 2 is not supported");
  if (!is_prime(p)) throw Error(ErrorCode::InvalidField, "characteristic must be an odd prime");
  if (degree == 0) throw Error(ErrorCode::InvalidField, "extension degree must be positive");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < degree; ++i) {
    q *= p;
    if (q > kMaxFieldSize) throw Error(ErrorCode::InvalidField, "field too large for table arithmetic");
  }
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::unique_ptr<Field>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, degree}];
  if (!slot) slot.reset(new Field(p, degree));
  return *slot;
}

Elt Field::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Elt>(r);
}

Elt Field::inv(Elt a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  const std::uint32_t l = log_[a];
  return l == 0 ? 1 : exp_[q_ - 1 - l];
}

Elt Field::pow(Elt a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t l = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[l];
}

int Field::chi(Elt a) const {
  if (a == 0) return 0;
  return (log_[a] % 2 == 0) ? 1 : -1;
}

std::optional<Elt> Field::sqrt(Elt a) const {
  if (a == 0) return Elt{0};
  const std::uint32_t l = log_[a];
  if (l % 2 != 0) return std::nullopt;
  const Elt r = exp_[l / 2];
  const Elt s = neg(r);
  return r < s ? r : s;
}

Elt Field::frobenius(Elt a, unsigned j) const {
  std::uint64_t e = 1;
  for (unsigned i = 0; i < j % k_; ++i) e *= p_;
  return pow(a, e);
}

std::vector<std::uint32_t> Field::coefficients(Elt a) const { return digits(a, p_, k_); }

Elt Field::from_coefficients(std::span<const std::uint32_t> c) const {
  if (c.size() != k_) throw Error(ErrorCode::ArityError, "coefficient vector length must equal the extension degree");
  Poly d(c.begin(), c.end());
  for (auto v : d) {
    if (v >= p_) throw Error(ErrorCode::InvalidInput, "coefficient out of range");
  }
  return encode(d, p_);
}

Embedding::Embedding(const Field& from, const Field& to) : from_(&from), to_(&to) {
  if (from.characteristic() != to.characteristic() || to.degree() % from.degree() != 0) {
    throw Error(ErrorCode::InvalidField, "no embedding between these fields");
  }
  const auto& m = from.modulus();
  Elt root = 0;
  bool found = false;
  for (Elt r = 0; r < to.size() && !found; ++r) {
    Elt v = 1;  // Horner on the monic modulus
    for (std::size_t i = m.size(); i-- > 0;) v = to.add(to.mul(v, r), to.from_int(m[i]));
    if (v == 0) {
      root = r;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::InternalInconsistency, "modulus has no root in the extension");
  if (from.degree() == 1) root = 0;  // x ≡ 0 for the linear modulus x

  image_.assign(from.size(), 0);
  preimage_.assign(to.size(), 0xffffffffu);
  for (Elt a = 0; a < from.size(); ++a) {
    const auto c = from.coefficients(a);
    Elt v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = to.add(to.mul(v, root), to.from_int(c[i]));
    image_[a] = v;
    preimage_[v] = a;
  }
}

const Embedding& Embedding::get(const Field& from, const Field& to) {
  static std::mutex mu;
  static std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{&from, &to}];
  if (!slot) slot.reset(new Embedding(from, to));
  return *slot;
}

std::optional<Elt> Embedding::restrict(Elt b) const {
  const std::uint32_t a = preimage_[b];
  if (a == 0xffffffffu) return std::nullopt;
  return a;
}

}  // namespace fanoscope
