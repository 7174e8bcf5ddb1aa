#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fanoscope/fano.hpp"
#include "fanoscope/sampling.hpp"

namespace fanoscope {

std::string to_string(const TPoint& t);

// A point of T (negative = false) or of its copy T' (negative = true).
struct SignedTorsorPoint {
  bool negative = false;
  TPoint point;

  SignedTorsorPoint operator-() const { return {!negative, point}; }
  auto operator<=>(const SignedTorsorPoint&) const = default;
};

std::string to_string(const SignedTorsorPoint& s);

// A closed point of C with a sign: degree 1 is a K-rational ruling point of the
// model, degree 2 is one of two Frobenius-conjugate ruling points of the
// extension model (the smaller one represents the orbit).
struct DivisorLetter {
  RulingPoint point;
  std::uint8_t degree = 1;
  int sign = 1;

  auto operator<=>(const DivisorLetter&) const = default;
};

struct DivisorWord {
  std::vector<DivisorLetter> letters;

  int degree() const;
  DivisorWord operator+(const DivisorWord& o) const;
};

std::string to_string(const DivisorWord& w);

// An element of G = Pic^0 + T + Pic^1 + T' with component tag in Z/4. Even tags
// are divisor classes (canonical class identified with zero) stored as their
// permutation of the universe; odd tags are the signed torsor point itself.
struct ClassAction {
  int tag = 0;
  std::vector<std::uint32_t> perm;         // even tags: image index of each universe point
  std::optional<SignedTorsorPoint> point;  // odd tags
  DivisorWord word;                        // even tags: a defining word

  bool is_identity() const;
  // Equality is permutation (or point) equality; the word is ignored.
  bool operator==(const ClassAction& o) const { return tag == o.tag && perm == o.perm && point == o.point; }
};

// The action of divisors of C on T + T' over the field of a FanoModel. The
// universe is every K-point of T followed by every K-point of T'. Throws
// NonreducedZ when Z is not reduced.
class TorsorGroup {
 public:
  explicit TorsorGroup(const FanoModel& m);

  const FanoModel& model() const { return *m_; }
  const std::vector<SignedTorsorPoint>& universe() const { return universe_; }
  std::size_t torsor_size() const { return universe_.size() / 2; }
  // Throws InvalidInput for a point outside the universe.
  std::uint32_t index_of(const SignedTorsorPoint& s) const;

  const std::vector<DivisorLetter>& rational_letters() const { return rational_; }
  const std::vector<DivisorLetter>& pair_letters() const { return pairs_; }
  // Hyperelliptic conjugate, same degree and sign.
  DivisorLetter conjugate(const DivisorLetter& l) const;
  DivisorLetter inverse(const DivisorLetter& l) const;

  // t + (c) = -j_{bar c}(t) and -t + (c) = j_c(t); a degree 2 letter applies
  // both conjugates over the extension and restricts back.
  SignedTorsorPoint act(const DivisorLetter& l, const SignedTorsorPoint& x) const;
  SignedTorsorPoint act(const DivisorWord& w, const SignedTorsorPoint& x) const;

  ClassAction identity() const;
  ClassAction class_of(const DivisorWord& w) const;
  ClassAction element(const SignedTorsorPoint& s) const;
  ClassAction add(const ClassAction& a, const ClassAction& b) const;

  // Every class of effective words of degree <= 3 in the letters, deduplicated
  // by permutation, each with the first word found.
  const std::vector<ClassAction>& classes() const;
  // The unique class D with -s + D = t. Throws NeedsExtension when no word of
  // degree <= 3 reaches t (odd classes need a rational point of C) and
  // InternalInconsistency when two classes do.
  ClassAction sum_torsor_points(const SignedTorsorPoint& s, const SignedTorsorPoint& t) const;

 private:
  const std::vector<std::uint32_t>& letter_perm(const DivisorLetter& l) const;
  SignedTorsorPoint apply_positive(const DivisorLetter& l, const SignedTorsorPoint& x) const;

  const FanoModel* m_;
  std::vector<SignedTorsorPoint> universe_;
  std::vector<DivisorLetter> rational_;
  std::vector<DivisorLetter> pairs_;
  mutable std::map<DivisorLetter, std::vector<std::uint32_t>> perms_;
  mutable std::vector<ClassAction> classes_;
};

struct AxiomCheck {
  std::string name;
  bool pass = true;
  int trials = 0;
  std::string witness;  // first failure
};

struct GroupAxiomReport {
  std::uint64_t q = 0;
  std::size_t torsor_size = 0;
  std::int64_t class_number = 0;  // from the zeta function over the model's field
  std::size_t even_classes = 0, odd_classes = 0;
  std::size_t rational_letters = 0, pair_letters = 0;
  int trials = 0;
  std::vector<AxiomCheck> checks;

  bool pass() const;
};

struct AxiomBudget {
  int trials = 500;
  int associativity = 10;
};

// Commutation, canonical class, two representations, composition, class
// count, freeness at Z, simple transitivity, commutativity, associativity and
// component tags. Trials are drawn from rng.
GroupAxiomReport verify_group_axioms(const TorsorGroup& g, const AxiomBudget& budget, Rng& rng);

}  // namespace fanoscope
