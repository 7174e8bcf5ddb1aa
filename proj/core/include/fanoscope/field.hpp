#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fanoscope {

// Element handle: the base-p code sum c_i p^i of the coefficient vector in
// F_p[x]/(m). Zero is 0 and one is 1; integers reduce to themselves mod p.
using Elt = std::uint32_t;

// F_{p^k} with the lexicographically smallest monic irreducible modulus.
// Instances are interned and immutable; references stay valid for the
// lifetime of the process.
class Field {
 public:
  static const Field& get(std::uint32_t p, unsigned degree = 1);

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint32_t size() const { return q_; }
  // Coefficients a_0..a_{k-1} of x^k + a_{k-1} x^{k-1} + ... + a_0.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Elt generator() const { return exp_[1]; }

  Elt zero() const { return 0; }
  Elt one() const { return 1; }
  Elt from_int(long long n) const;

  Elt add(Elt a, Elt b) const {
    if (k_ == 1) {
      Elt s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint32_t la = log_[a];
    std::uint32_t d = log_[b] + (q_ - 1) - la;
    if (d >= q_ - 1) d -= q_ - 1;
    std::uint32_t z = zech_[d];
    if (z == kNone) return 0;
    return exp_[la + z];
  }
  Elt neg(Elt a) const {
    if (a == 0) return 0;
    if (k_ == 1) return p_ - a;
    return exp_[log_[a] + (q_ - 1) / 2];
  }
  Elt sub(Elt a, Elt b) const { return add(a, neg(b)); }
  Elt mul(Elt a, Elt b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  // Throws Error(DivisionByZero) on zero.
  Elt inv(Elt a) const;
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt pow(Elt a, std::uint64_t e) const;
  Elt square(Elt a) const { return mul(a, a); }

  // a^((q-1)/2) mapped to {-1, 0, 1}.
  int chi(Elt a) const;
  // Root with the smaller code, or nullopt when a is not a square.
  std::optional<Elt> sqrt(Elt a) const;
  // a^(p^j).
  Elt frobenius(Elt a, unsigned j = 1) const;

  std::vector<std::uint32_t> coefficients(Elt a) const;
  Elt from_coefficients(std::span<const std::uint32_t> c) const;

  // Discrete log w.r.t. generator(); a must be nonzero.
  std::uint32_t log(Elt a) const { return log_[a]; }
  Elt exp(std::uint32_t e) const { return exp_[e % (q_ - 1)]; }

  bool operator==(const Field& o) const { return this == &o; }

 private:
  Field(std::uint32_t p, unsigned k);

  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t p_;
  unsigned k_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<Elt> exp_;  // length 2(q-1) so that log sums need no reduction
  std::vector<std::uint32_t> zech_;
};

// Field homomorphism F_{p^a} -> F_{p^b}, a | b, sending x to the root of the
// source modulus with the smallest code.
class Embedding {
 public:
  static const Embedding& get(const Field& from, const Field& to);

  const Field& source() const { return *from_; }
  const Field& target() const { return *to_; }
  Elt operator()(Elt a) const { return image_[a]; }
  // Preimage when b lies in the image.
  std::optional<Elt> restrict(Elt b) const;

 private:
  Embedding(const Field& from, const Field& to);

  const Field* from_;
  const Field* to_;
  std::vector<Elt> image_;
  std::vector<std::uint32_t> preimage_;
};

bool is_prime(std::uint64_t n);

}  // namespace fanoscope
