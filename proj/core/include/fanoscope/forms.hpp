#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fanoscope/field.hpp"

namespace fanoscope {

// Univariate polynomial, coefficients from degree 0 upward, no trailing zeros.
class UPoly {
 public:
  explicit UPoly(const Field& F) : F_(&F) {}
  UPoly(const Field& F, std::vector<Elt> coeffs);

  const Field& field() const { return *F_; }
  const std::vector<Elt>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  Elt operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elt lead() const { return c_.empty() ? 0 : c_.back(); }

  Elt evaluate(Elt x) const;
  UPoly derivative() const;
  UPoly monic() const;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scaled(Elt s) const;
  // Euclidean division; throws DivisionByZero for a zero divisor.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const;

  bool operator==(const UPoly& o) const { return F_ == o.F_ && c_ == o.c_; }

 private:
  void trim();
  const Field* F_;
  std::vector<Elt> c_;
};

UPoly gcd(UPoly a, UPoly b);

// Roots in the coefficient field with multiplicities, ascending by code.
std::vector<std::pair<Elt, int>> roots_with_multiplicity(const UPoly& f);

// Homogeneous form in two variables: sum_i c[i] s^(d-i) t^i.
class BinaryForm {
 public:
  BinaryForm(const Field& F, int degree);
  BinaryForm(const Field& F, int degree, std::vector<Elt> coeffs);

  const Field& field() const { return *F_; }
  int degree() const { return d_; }
  const std::vector<Elt>& coeffs() const { return c_; }
  Elt coeff(int i) const { return c_[i]; }
  void set_coeff(int i, Elt v) { c_[i] = v; }
  bool is_zero() const;

  Elt evaluate(Elt s, Elt t) const;
  BinaryForm operator+(const BinaryForm& o) const;
  BinaryForm operator-(const BinaryForm& o) const;
  BinaryForm operator*(const BinaryForm& o) const;
  BinaryForm scaled(Elt s) const;
  BinaryForm mapped(const Embedding& e) const;

  // f(x, 1).
  UPoly dehomogenize() const;
  // Roots (s:t) in P^1 of the coefficient field, normalized, with
  // multiplicity; (1:0) listed last. Requires a nonzero form.
  std::vector<std::pair<std::array<Elt, 2>, int>> projective_roots() const;
  // No repeated root over the algebraic closure (and the form is nonzero).
  bool is_reduced() const;
  // Equal up to a nonzero scalar.
  bool projectively_equal(const BinaryForm& o) const;

  bool operator==(const BinaryForm& o) const { return F_ == o.F_ && d_ == o.d_ && c_ == o.c_; }

 private:
  const Field* F_;
  int d_;
  std::vector<Elt> c_;
};

constexpr int kMaxVars = 8;
using Exponent = std::array<std::uint8_t, kMaxVars>;

// Sparse homogeneous polynomial; no zero coefficient is ever stored.
class HomogeneousForm {
 public:
  HomogeneousForm(const Field& F, int nvars, int degree);

  static HomogeneousForm variable(const Field& F, int nvars, int i);
  static HomogeneousForm constant(const Field& F, int nvars, Elt c);
  // Linear form sum_i coeffs[i] x_i.
  static HomogeneousForm linear(const Field& F, std::span<const Elt> coeffs);

  const Field& field() const { return *F_; }
  int num_vars() const { return n_; }
  int degree() const { return d_; }
  const std::map<Exponent, Elt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds c to the coefficient of x^e.
  void add_term(const Exponent& e, Elt c);
  Elt coefficient(const Exponent& e) const;

  // Throws ArityError when point.size() != num_vars().
  Elt evaluate(std::span<const Elt> point) const;
  HomogeneousForm partial(int i) const;
  std::vector<HomogeneousForm> gradient() const;
  // Substitutes x_i = sum_j A[i][j] y_j for an n x r matrix A.
  HomogeneousForm substitute(const std::vector<std::vector<Elt>>& A) const;
  HomogeneousForm mapped(const Embedding& e) const;

  HomogeneousForm operator+(const HomogeneousForm& o) const;
  HomogeneousForm operator-(const HomogeneousForm& o) const;
  HomogeneousForm operator*(const HomogeneousForm& o) const;
  HomogeneousForm scaled(Elt s) const;

  bool operator==(const HomogeneousForm& o) const {
    return F_ == o.F_ && n_ == o.n_ && d_ == o.d_ && terms_ == o.terms_;
  }

 private:
  const Field* F_;
  int n_;
  int d_;
  std::map<Exponent, Elt> terms_;
};

// Exponent vector helper: make_exponent({1,0,2}).
Exponent make_exponent(std::initializer_list<int> e);

// Symmetric Gram matrix M of a quadratic form, q(v) = v^T M v.
std::vector<std::vector<Elt>> gram_matrix(const HomogeneousForm& q);
HomogeneousForm quadratic_from_gram(const Field& F, const std::vector<std::vector<Elt>>& M);

}  // namespace fanoscope
