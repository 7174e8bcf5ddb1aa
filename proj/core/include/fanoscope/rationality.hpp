#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fanoscope/fano.hpp"
#include "fanoscope/forms.hpp"
#include "fanoscope/threefold.hpp"

namespace fanoscope {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;
using ZVec = std::vector<Int>;

enum class Verdict : std::uint8_t { Rational, Irrational, Unknown };
std::string_view to_string(Verdict v);

// Sparse homogeneous form with rational coefficients; no zero is stored.
class RationalForm {
 public:
  RationalForm(int nvars, int degree) : n_(nvars), d_(degree) {}

  static RationalForm variable(int nvars, int i);
  static RationalForm constant(int nvars, const Rat& c);

  int num_vars() const { return n_; }
  int degree() const { return d_; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Rat& c);
  Rat coefficient(const Exponent& e) const;
  Rat evaluate(const QVec& x) const;
  Int evaluate(const ZVec& x) const;  // requires integer coefficients
  RationalForm partial(int i) const;
  // Substitutes x_i = sum_j A[i][j] y_j for an n x r matrix A.
  RationalForm substitute(const QMat& A) const;
  // The primitive integer multiple with positive leading coefficient.
  RationalForm integer_primitive() const;
  // Throws InvalidInput when p divides a denominator.
  HomogeneousForm reduce(const Field& Fp) const;

  RationalForm operator+(const RationalForm& o) const;
  RationalForm operator-(const RationalForm& o) const;
  RationalForm operator*(const RationalForm& o) const;
  RationalForm scaled(const Rat& s) const;
  bool operator==(const RationalForm& o) const = default;

 private:
  int n_;
  int d_;
  std::map<Exponent, Rat> terms_;
};

// Symmetric Gram matrix of a quadratic form and back.
QMat gram_matrix(const RationalForm& q);
Rat determinant(QMat M);

// Y = {x0 Q0 + x1 Q1 = 0} over Q with P = {x0 = x1 = 0}, as in normalize().
struct RationalThreefold {
  QMat change;  // original coordinates = change * normalized coordinates
  RationalForm f{5, 3}, Q0{5, 2}, Q1{5, 2};
};
// Throws NotContained when the plane does not lie on the cubic.
RationalThreefold normalize_rational(const RationalForm& cubic, const QMat& plane_rows);
// Residual quadric of the member (s:t) in fiber coordinates (u, x2, x3, x4).
RationalForm pencil_member(const RationalThreefold& y, const Int& s, const Int& t);

// Primitive integer vector with first nonzero entry positive.
ZVec primitive(const QVec& v);
// Height (max |entry|) then lexicographic in the order 0, 1, -1, 2, -2, ...
bool height_order(const ZVec& a, const ZVec& b);
std::string to_string(const ZVec& v);

// Rational points of Z in plane coordinates (x2 : x3 : x4), in height_order.
// The two conics are eliminated by a resultant after a unimodular change that
// keeps the projection centre off the first conic; the quartic's rational roots
// come from the rational root theorem.
std::vector<ZVec> rational_nodes(const RationalThreefold& y);

struct RationalLine {
  ZVec A;  // on {x1 = 0}, normalized coordinates, A[0] >= 1
  ZVec B;  // on {x0 = 0}, normalized coordinates, B[1] >= 1
};
// Lines of Y disjoint from P spanned by primitive A, B of height <= bound; the
// first in (max height, A, B) order. `checked` counts candidate pairs tested.
std::optional<RationalLine> search_rational_line(const RationalThreefold& y, int bound, std::uint64_t* checked = nullptr);

enum class Place : std::uint8_t { None, Real, Prime };

struct LocalSolvability {
  bool solvable = true;
  Place place = Place::None;
  Int prime = 0;         // obstruction prime when place == Prime
  ZVec diagonal;         // squarefree integer diagonalization
  std::optional<ZVec> witness;  // small isotropic vector of the input form, if found
  bool rechecked = false;       // the obstruction was confirmed independently
  std::string recheck_method;

  std::string place_name() const;  // "none", "R" or "Q_p"
};

// Hasse-Minkowski for a nondegenerate quaternary form: definite over R, or
// anisotropic over Q_p (discriminant a square and Hasse invariant different
// from (-1,-1)_p) for p = 2 or p dividing the diagonal. An obstruction is
// confirmed by Sylvester minors (R) or by the absence of primitive solutions
// modulo p^3, or 2^6 (p <= 23; larger primes stay unconfirmed). Throws
// Degenerate for a singular form and ArityError unless 4x4.
LocalSolvability local_solvability(const QMat& gram, int witness_height = 3);

// Hilbert symbol (a, b)_p of nonzero integers.
int hilbert_symbol(const Int& a, const Int& b, const Int& p);

struct RationalityOptions {
  int height_bound = 20;
  std::vector<std::uint32_t> primes{3, 5, 7, 11, 13};
};

struct RationalVerdict {
  Verdict verdict = Verdict::Unknown;
  std::string witness_kind;  // "node", "line", "pencil-member" or "none"
  ZVec node;                 // plane coordinates (x2 : x3 : x4)
  ZVec node_ambient;         // original coordinates
  std::array<ZVec, 2> line;  // original coordinates
  std::array<Int, 2> member{0, 0};
  LocalSolvability obstruction;
  std::uint32_t good_prime = 0;
  int height_bound = 0;
  std::size_t rational_nodes = 0;
  std::uint64_t members_scanned = 0;
  std::uint64_t line_pairs_checked = 0;
  std::size_t unconfirmed_obstructions = 0;
  bool verified = false;  // witness re-evaluated exactly
};

// Semidecision over Q in a fixed priority order: rational node, local
// obstruction on a pencil member of height <= bound, rational line of height
// <= bound, else Unknown. Generality is certified by reduction modulo the
// first good prime; throws NeedsDifferentPrime when none is good.
RationalVerdict decide_over_rationals(const RationalForm& cubic, const QMat& plane_rows,
                                      const RationalityOptions& opt = {});

struct FiniteFieldVerdict {
  Verdict verdict = Verdict::Rational;
  TPoint witness;  // kind Z: a node; kind U: a line disjoint from P; kind Cz: a line through a node
  bool verified = false;
};

// Always Rational: a rational node, else a line disjoint from P, else any
// point of T. Throws InternalInconsistency when T(F_q) is empty.
FiniteFieldVerdict decide_over_finite_field(const NormalizedThreefold& nf);

}  // namespace fanoscope
