#include "fanoscope/torsor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "fanoscope/error.hpp"

namespace fanoscope {

namespace {

int mod4(int x) { return ((x % 4) + 4) % 4; }

std::string letter_string(const DivisorLetter& l) {
  std::string s = l.sign > 0 ? "+" : "-";
  s += l.degree == 1 ? "(" : "{";
  s += std::to_string(l.point.fiber) + ":" + std::to_string(l.point.cls);
  s += l.degree == 1 ? ")" : "}";
  return s;
}

std::vector<std::uint32_t> invert(const std::vector<std::uint32_t>& p) {
  std::vector<std::uint32_t> inv(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

}  // namespace

std::string to_string(const TPoint& t) {
  switch (t.kind) {
    case TKind::U: return "U" + to_string(t.line);
    case TKind::Cz: return "C" + to_string(t.z) + to_string(t.line);
    case TKind::Z: return "Z" + to_string(t.z);
  }
  return "?";
}

std::string to_string(const SignedTorsorPoint& s) { return (s.negative ? "-" : "+") + to_string(s.point); }

int DivisorWord::degree() const {
  int d = 0;
  for (const auto& l : letters) d += l.sign * l.degree;
  return d;
}

DivisorWord DivisorWord::operator+(const DivisorWord& o) const {
  DivisorWord w = *this;
  w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
  return w;
}

std::string to_string(const DivisorWord& w) {
  if (w.letters.empty()) return "0";
  std::string s;
  for (const auto& l : w.letters) s += letter_string(l);
  return s;
}

bool ClassAction::is_identity() const {
  if (tag != 0) return false;
  for (std::uint32_t i = 0; i < perm.size(); ++i) {
    if (perm[i] != i) return false;
  }
  return true;
}

TorsorGroup::TorsorGroup(const FanoModel& m) : m_(&m) {
  if (!compute_Z(m.base_threefold()).reduced()) throw Error(ErrorCode::NonreducedZ, "the torsor group needs reduced Z");
  const auto T = m.torsor_points();
  for (bool neg : {false, true}) {
    for (const TPoint& t : T) universe_.push_back({neg, t});
  }
  for (const RulingPoint& c : m.curve_points()) rational_.push_back({c, 1, 1});
  const FanoModel& ext = m.extension();
  for (const RulingPoint& c : ext.curve_points()) {
    const RulingPoint cs = ext.frobenius(c, m.K().degree());
    if (c < cs) pairs_.push_back({c, 2, 1});
  }
}

std::uint32_t TorsorGroup::index_of(const SignedTorsorPoint& s) const {
  const auto it = std::lower_bound(universe_.begin(), universe_.end(), s);
  if (it == universe_.end() || *it != s) throw Error(ErrorCode::InvalidInput, "not in the universe: " + to_string(s));
  return static_cast<std::uint32_t>(it - universe_.begin());
}

DivisorLetter TorsorGroup::conjugate(const DivisorLetter& l) const {
  if (l.degree == 1) return {m_->conjugate(l.point), 1, l.sign};
  const FanoModel& ext = m_->extension();
  const RulingPoint c = ext.conjugate(l.point);
  return {std::min(c, ext.frobenius(c, m_->K().degree())), 2, l.sign};
}

DivisorLetter TorsorGroup::inverse(const DivisorLetter& l) const { return {l.point, l.degree, -l.sign}; }

SignedTorsorPoint TorsorGroup::apply_positive(const DivisorLetter& l, const SignedTorsorPoint& x) const {
  auto step = [](const FanoModel& m, RulingPoint c, const SignedTorsorPoint& y) -> SignedTorsorPoint {
    if (y.negative) return {false, m.j(c, y.point)};
    return {true, m.j(m.conjugate(c), y.point)};
  };
  if (l.degree == 1) return step(*m_, l.point, x);
  const FanoModel& ext = m_->extension();
  const RulingPoint cs = ext.frobenius(l.point, m_->K().degree());
  const SignedTorsorPoint y = step(ext, cs, step(ext, l.point, {x.negative, m_->map_up(x.point)}));
  const auto down = m_->restrict_down(y.point);
  if (!down) throw Error(ErrorCode::InternalInconsistency, "closed point of degree 2 moved a rational point off K");
  return {y.negative, *down};
}

const std::vector<std::uint32_t>& TorsorGroup::letter_perm(const DivisorLetter& l) const {
  const DivisorLetter key{l.point, l.degree, 1};
  auto it = perms_.find(key);
  if (it == perms_.end()) {
    std::vector<std::uint32_t> p(universe_.size());
    for (std::uint32_t i = 0; i < universe_.size(); ++i) p[i] = index_of(apply_positive(key, universe_[i]));
    it = perms_.emplace(key, std::move(p)).first;
  }
  return it->second;
}

SignedTorsorPoint TorsorGroup::act(const DivisorLetter& l, const SignedTorsorPoint& x) const {
  if (l.sign > 0) return apply_positive(l, x);
  const auto& p = letter_perm(l);
  const std::uint32_t i = index_of(x);
  return universe_[std::find(p.begin(), p.end(), i) - p.begin()];
}

SignedTorsorPoint TorsorGroup::act(const DivisorWord& w, const SignedTorsorPoint& x) const {
  SignedTorsorPoint y = x;
  for (const auto& l : w.letters) y = act(l, y);
  return y;
}

ClassAction TorsorGroup::identity() const {
  ClassAction a;
  a.perm.resize(universe_.size());
  std::iota(a.perm.begin(), a.perm.end(), 0u);
  return a;
}

ClassAction TorsorGroup::class_of(const DivisorWord& w) const {
  ClassAction a = identity();
  for (const auto& l : w.letters) {
    const auto& lp = letter_perm(l);
    const auto p = l.sign > 0 ? lp : invert(lp);
    for (auto& v : a.perm) v = p[v];
  }
  a.tag = mod4(2 * w.degree());
  a.word = w;
  return a;
}

ClassAction TorsorGroup::element(const SignedTorsorPoint& s) const {
  index_of(s);
  ClassAction a;
  a.tag = s.negative ? 3 : 1;
  a.point = s;
  return a;
}

ClassAction TorsorGroup::add(const ClassAction& a, const ClassAction& b) const {
  const int tag = mod4(a.tag + b.tag);
  ClassAction r;
  if (a.point && b.point) {
    r = sum_torsor_points(*a.point, *b.point);
  } else if (a.point || b.point) {
    const ClassAction& cls = a.point ? b : a;
    const SignedTorsorPoint& s = a.point ? *a.point : *b.point;
    r = element(universe_[cls.perm[index_of(s)]]);
  } else {
    r = a;
    for (auto& v : r.perm) v = b.perm[v];
    r.word = a.word + b.word;
    r.tag = tag;
  }
  if (r.tag != tag) throw Error(ErrorCode::InternalInconsistency, "component tags do not add");
  return r;
}

const std::vector<ClassAction>& TorsorGroup::classes() const {
  if (!classes_.empty()) return classes_;
  std::map<std::pair<int, std::vector<std::uint32_t>>, std::size_t> seen;
  auto add_word = [&](DivisorWord w) {
    ClassAction a = class_of(w);
    if (seen.emplace(std::make_pair(a.tag, a.perm), classes_.size()).second) classes_.push_back(std::move(a));
  };
  const auto& R = rational_;
  add_word({});
  for (std::size_t i = 0; i < R.size(); ++i) add_word({{R[i]}});
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = i; j < R.size(); ++j) add_word({{R[i], R[j]}});
  for (const auto& p : pairs_) add_word({{p}});
  for (std::size_t i = 0; i < R.size(); ++i) {
    for (std::size_t j = i; j < R.size(); ++j)
      for (std::size_t k = j; k < R.size(); ++k) add_word({{R[i], R[j], R[k]}});
    for (const auto& p : pairs_) add_word({{R[i], p}});
  }
  return classes_;
}

ClassAction TorsorGroup::sum_torsor_points(const SignedTorsorPoint& s, const SignedTorsorPoint& t) const {
  const std::uint32_t from = index_of(-s), to = index_of(t);
  const ClassAction* found = nullptr;
  for (const auto& c : classes()) {
    if (c.perm[from] != to) continue;
    if (found) {
      throw Error(ErrorCode::InternalInconsistency,
                  "two classes send " + to_string(-s) + " to " + to_string(t) + ": " + to_string(found->word) + ", " +
                      to_string(c.word));
    }
    found = &c;
  }
  if (!found) {
    throw Error(ErrorCode::NeedsExtension, "no divisor of degree <= 3 sends " + to_string(-s) + " to " + to_string(t));
  }
  return *found;
}

bool GroupAxiomReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

GroupAxiomReport verify_group_axioms(const TorsorGroup& g, const AxiomBudget& budget, Rng& rng) {
  const FanoModel& m = g.model();
  GroupAxiomReport rep;
  rep.q = m.K().size();
  rep.torsor_size = g.torsor_size();
  rep.trials = budget.trials;
  rep.rational_letters = g.rational_letters().size();
  rep.pair_letters = g.pair_letters().size();
  const ZetaData zd = zeta({discriminant(m.base_threefold())});
  const unsigned rel = m.K().degree() / m.base().degree();
  rep.class_number = rel == 1 ? zd.h : rel == 2 ? zd.h2 : 0;

  std::vector<DivisorLetter> letters = g.rational_letters();
  letters.insert(letters.end(), g.pair_letters().begin(), g.pair_letters().end());
  const auto& U = g.universe();
  auto any_letter = [&] { return letters[rng.below(letters.size())]; };
  auto any_point = [&] { return U[rng.below(U.size())]; };

  auto run = [&](const std::string& name, int trials, const std::function<std::string()>& trial) {
    AxiomCheck c{name, true, 0, ""};
    for (int i = 0; i < trials; ++i) {
      std::string w;
      try {
        w = trial();
      } catch (const Error& e) {
        w = e.what();
      }
      ++c.trials;
      if (!w.empty()) {
        c.pass = false;
        c.witness = w;
        break;
      }
    }
    rep.checks.push_back(c);
  };
  auto mismatch = [](const std::string& what, const SignedTorsorPoint& a, const SignedTorsorPoint& b) {
    return a == b ? std::string() : what + ": " + to_string(a) + " != " + to_string(b);
  };

  run("torsor_count", 1, [&] {
    if (rep.class_number == 0 || static_cast<std::int64_t>(rep.torsor_size) == rep.class_number) return std::string();
    return "#T = " + std::to_string(rep.torsor_size) + ", h = " + std::to_string(rep.class_number);
  });
  if (letters.empty() || U.empty()) {
    rep.checks.push_back({"letters", false, 0, "no closed points of degree <= 2 on C"});
    return rep;
  }
  run("commutation", budget.trials, [&] {
    const DivisorLetter c = any_letter(), d = any_letter();
    const SignedTorsorPoint x = any_point();
    return mismatch("(c)(d) vs (d)(c) " + letter_string(c) + letter_string(d), g.act(d, g.act(c, x)),
                    g.act(c, g.act(d, x)));
  });
  run("canonical_class_trivial", budget.trials, [&] {
    const DivisorLetter c = any_letter();
    const SignedTorsorPoint x = any_point();
    return mismatch("x + (c) + (bar c) " + letter_string(c), g.act(g.conjugate(c), g.act(c, x)), x);
  });
  run("two_representations", budget.trials, [&] {
    const DivisorLetter c = any_letter(), d = any_letter();
    const SignedTorsorPoint x = any_point();
    const DivisorWord w1{{c, g.inverse(d)}}, w2{{g.conjugate(d), g.inverse(g.conjugate(c))}};
    return mismatch("(c)-(d) vs (bar d)-(bar c) " + to_string(w1), g.act(w1, x), g.act(w2, x));
  });
  run("composition", budget.trials, [&] {
    auto word = [&] {
      DivisorWord w;
      for (std::uint64_t n = 1 + rng.below(3); n > 0; --n) {
        DivisorLetter l = any_letter();
        if (rng.below(2)) l = g.inverse(l);
        w.letters.push_back(l);
      }
      return w;
    };
    const DivisorWord a = word(), b = word();
    if (g.class_of(a + b) == g.add(g.class_of(a), g.class_of(b))) return std::string();
    return "class_of(" + to_string(a + b) + ") != class_of(" + to_string(a) + ") + class_of(" + to_string(b) + ")";
  });

  const auto& classes = g.classes();
  for (const auto& c : classes) (c.tag == 0 ? rep.even_classes : rep.odd_classes)++;
  run("class_count", 1, [&] {
    const std::size_t want_odd = g.rational_letters().empty() ? 0 : rep.torsor_size;
    if (rep.even_classes == rep.torsor_size && rep.odd_classes == want_odd) return std::string();
    return "even " + std::to_string(rep.even_classes) + ", odd " + std::to_string(rep.odd_classes) + ", #T " +
           std::to_string(rep.torsor_size);
  });

  std::vector<SignedTorsorPoint> zs;
  for (const Point& z : m.z_points()) zs.push_back({false, {TKind::Z, Line{}, z}});
  run("freeness_at_z", zs.empty() ? 0 : budget.trials, [&] {
    const ClassAction& c = classes[rng.below(classes.size())];
    SignedTorsorPoint z = zs[rng.below(zs.size())];
    if (rng.below(2)) z = -z;
    const bool fixes = c.perm[g.index_of(z)] == g.index_of(z);
    if (fixes == c.is_identity()) return std::string();
    return to_string(c.word) + (fixes ? " fixes " : " moves ") + to_string(z);
  });
  run("simple_transitivity", budget.trials, [&] {
    const SignedTorsorPoint s = any_point(), t = any_point();
    const ClassAction d = g.sum_torsor_points(s, t);
    if (d.tag != mod4((s.negative ? 3 : 1) + (t.negative ? 3 : 1))) return "tag of " + to_string(d.word);
    return mismatch("-s + D " + to_string(d.word), g.act(d.word, -s), t);
  });
  run("sum_commutes", budget.trials, [&] {
    const SignedTorsorPoint s = any_point(), t = any_point();
    if (g.sum_torsor_points(s, t) == g.sum_torsor_points(t, s)) return std::string();
    return "s + t != t + s for " + to_string(s) + ", " + to_string(t);
  });
  auto any_element = [&] {
    if (rng.below(2)) return g.element(any_point());
    return classes[rng.below(classes.size())];
  };
  auto describe = [](const ClassAction& a) { return a.point ? to_string(*a.point) : to_string(a.word); };
  run("associativity", budget.associativity, [&] {
    const ClassAction a = any_element(), b = any_element(), c = any_element();
    if (g.add(g.add(a, b), c) == g.add(a, g.add(b, c))) return std::string();
    return "(a + b) + c != a + (b + c) for " + describe(a) + ", " + describe(b) + ", " + describe(c);
  });
  run("component_tags", budget.trials, [&] {
    const ClassAction s = g.element(any_point());
    const ClassAction s2 = g.add(s, s), s3 = g.add(s2, s), s4 = g.add(s3, s);
    if (s2.tag == 2 && s4.tag == 0) return std::string();
    return "tags " + std::to_string(s2.tag) + ", " + std::to_string(s4.tag) + " for " + describe(s);
  });
  return rep;
}

}  // namespace fanoscope
