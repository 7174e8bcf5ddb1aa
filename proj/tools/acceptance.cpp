#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "fanoscope/error.hpp"
#include "fanoscope/fano.hpp"
#include "fanoscope/fourfold.hpp"
#include "fanoscope/pencil.hpp"
#include "fanoscope/rationality.hpp"
#include "fanoscope/sampling.hpp"
#include "fanoscope/torsor.hpp"

namespace fanoscope::cli {
namespace {

using Clock = std::chrono::steady_clock;

// Outcome of one criterion before its time limit is applied.
struct Outcome {
  bool correct = true;
  std::ostringstream detail;
  std::string witness;

  void fail(const std::string& w) {
    if (correct) witness = w;
    correct = false;
  }
};

struct Criterion {
  int id;
  const char* name;
  const char* tolerance;
  double limit_seconds;
  void (*body)(const AcceptanceOptions&, Outcome&);
};

std::uint64_t seed_for(const AcceptanceOptions& opt, int id) { return opt.seed * 1000003u + static_cast<std::uint64_t>(id); }

std::string name_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

struct CorpusThreefold {
  std::string name;
  Input input;
  NormalizedThreefold nf;
};

std::vector<CorpusThreefold> threefolds(const AcceptanceOptions& opt) {
  std::vector<CorpusThreefold> out;
  for (const auto& path : corpus_files(opt.corpus, "threefolds")) {
    Input in = load_input(path);
    NormalizedThreefold nf = normalize(*in.cubic, make_subspace(in.field.field(), in.plane));
    out.push_back({name_of(path), std::move(in), std::move(nf)});
  }
  return out;
}

void lines_in_p4(const AcceptanceOptions&, Outcome& o) {
  for (std::uint64_t q : {3u, 5u, 7u}) {
    const auto start = Clock::now();
    const auto n = enumerate_lines(Field::get(static_cast<std::uint32_t>(q)), 4).size();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const std::uint64_t want = (q * q * q * q * q - 1) * (q * q * q * q - 1) / ((q * q - 1) * (q - 1));
    o.detail << "q=" << q << ": " << n << "/" << want << "; ";
    if (n != want) o.fail("q=" + std::to_string(q));
    if (secs > 1.0) o.fail("q=" + std::to_string(q) + " exceeded 1 s");
  }
}

void z_length(const AcceptanceOptions& opt, Outcome& o) {
  Rng rng(seed_for(opt, 2));
  for (std::uint32_t q : {3u, 5u, 7u}) {
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
      const GeneralSample s = sample_general_threefold(Field::get(q), rng);
      const int len = compute_Z(s.nf).total_length();
      ok += len == 4;
      if (len != 4) o.fail("q=" + std::to_string(q) + " sample " + std::to_string(i) + " length " + std::to_string(len));
    }
    o.detail << "q=" << q << ": " << ok << "/100; ";
  }
}

void discriminant_models(const AcceptanceOptions& opt, Outcome& o) {
  int ok = 0, total = 0;
  for (const auto& t : threefolds(opt)) {
    ++total;
    const BinaryForm d = discriminant(t.nf);
    const bool sextic = d.degree() == 6 && !d.is_zero() && d.coeffs().size() == 7;
    const bool models = match_models(t.nf, HyperellipticModel{d});
    ok += sextic && models;
    if (!sextic) o.fail(t.name + ": discriminant is not a sextic");
    if (!models) o.fail(t.name + ": match_models failed");
  }
  if (total == 0) o.fail("no corpus threefolds");
  o.detail << ok << "/" << total << " corpus threefolds";
}

// Intersection numbers and surface line counts from random general F_5 threefolds.
struct IntersectionTally {
  std::size_t sigma_tau = 0, sigma_sigma = 0, tau_tau = 0, surfaces = 0;
  std::string bad;
};

IntersectionTally intersections(const AcceptanceOptions& opt, int id) {
  IntersectionTally t;
  Rng rng(seed_for(opt, id));
  const Field& F = Field::get(5);
  for (int round = 0; round < 40 && (t.sigma_tau < 20 || t.sigma_sigma < 20 || t.tau_tau < 20 || t.surfaces < 10); ++round) {
    const GeneralSample s = sample_general_threefold(F, rng, true, 1);
    const IntersectionReport r = verify_intersection_numbers(s.nf, 5, rng);
    auto scan = [&](const std::vector<int>& v, int want, const char* what) {
      for (int x : v)
        if (x != want && t.bad.empty())
          t.bad = std::string(what) + " = " + std::to_string(x) + " in round " + std::to_string(round);
      return v.size();
    };
    t.sigma_tau += scan(r.sigma_tau, 2, "sigma.tau");
    t.sigma_sigma += scan(r.sigma_sigma, 3, "sigma.sigma");
    t.tau_tau += scan(r.tau_tau, 1, "tau.tau");
    t.surfaces += scan(r.surface_line_counts, 27, "surface lines");
  }
  return t;
}

void intersection_numbers(const AcceptanceOptions& opt, Outcome& o) {
  const IntersectionTally t = intersections(opt, 4);
  o.detail << "sigma.tau=2 on " << t.sigma_tau << ", sigma.sigma=3 on " << t.sigma_sigma << ", tau.tau=1 on " << t.tau_tau;
  if (!t.bad.empty()) o.fail(t.bad);
  if (t.sigma_tau < 20 || t.sigma_sigma < 20 || t.tau_tau < 20) o.fail("fewer than 20 samples");
}

void twenty_seven_lines(const AcceptanceOptions& opt, Outcome& o) {
  const IntersectionTally t = intersections(opt, 5);
  o.detail << "27 lines on " << t.surfaces << " cubic surfaces";
  if (!t.bad.empty()) o.fail(t.bad);
  if (t.surfaces < 10) o.fail("fewer than 10 surfaces");
}

void decomposition(const AcceptanceOptions& opt, Outcome& o) {
  int ok = 0, total = 0;
  for (const auto& t : threefolds(opt)) {
    ++total;
    const FanoModel m(t.nf, t.nf.F());
    bool pass = true;
    for (const FanoModel* model : {&m, &m.extension()}) {
      const FanoDecomposition d = decompose(*model);
      if (d.pass()) continue;
      pass = false;
      for (const auto& c : d.checks)
        if (!c.pass) {
          o.fail(t.name + " q=" + std::to_string(d.q) + ": " + c.name);
          break;
        }
    }
    ok += pass;
  }
  if (total == 0) o.fail("no corpus threefolds");
  o.detail << ok << "/" << total << " corpus threefolds over F_q and F_q^2";
}

// Group axiom reports shared by criteria 7 and 8.
std::vector<std::pair<std::string, GroupAxiomReport>> axiom_reports(const AcceptanceOptions& opt) {
  std::vector<std::pair<std::string, GroupAxiomReport>> out;
  for (const auto& t : threefolds(opt)) {
    const std::uint64_t q = t.nf.F().size();
    if (q != 3 && q != 5) continue;
    if (!certify_generality(t.nf, 1).Z_reduced) continue;
    const FanoModel m(t.nf, t.nf.F());
    if (m.z_points().empty() || m.curve_points().empty()) continue;
    const TorsorGroup g(m);
    Rng rng(seed_for(opt, 7) + out.size());
    out.emplace_back(t.name, verify_group_axioms(g, AxiomBudget{500, 10}, rng));
  }
  return out;
}

void torsor_suite(const AcceptanceOptions& opt, Outcome& o) {
  int counted = 0, equal = 0;
  bool cross_checked = false;
  for (const auto& t : threefolds(opt)) {
    if (!certify_generality(t.nf, 1).Z_reduced) continue;
    ++counted;
    const HyperellipticModel C{discriminant(t.nf)};
    const ZetaData z = zeta(C);
    const FanoModel m(t.nf, t.nf.F());
    const auto T1 = static_cast<std::int64_t>(m.torsor_points().size());
    const auto T2 = static_cast<std::int64_t>(m.extension().torsor_points().size());
    if (T1 == z.h && T2 == z.h2) {
      ++equal;
    } else {
      o.fail(t.name + ": #T = " + std::to_string(T1) + ", " + std::to_string(T2) + " against h = " + std::to_string(z.h) +
             ", " + std::to_string(z.h2));
    }
    if (!cross_checked && t.nf.F().size() == 5) {
      cross_checked = true;
      const std::int64_t h = class_number_by_effective_divisors(C);
      o.detail << "h cross-check on " << t.name << ": " << h << " vs " << z.h << "; ";
      if (h != z.h) o.fail(t.name + ": class number cross-check");
    }
  }
  o.detail << "#T = h for k = 1, 2 on " << equal << "/" << counted << " reduced-Z threefolds; ";
  if (counted == 0) o.fail("no reduced-Z corpus threefolds");
  if (!cross_checked) o.fail("no F_5 threefold for the class number cross-check");
  bool have3 = false, have5 = false;
  for (const auto& [name, r] : axiom_reports(opt)) {
    have3 = have3 || r.q == 3;
    have5 = have5 || r.q == 5;
    o.detail << "axioms " << name << " (" << r.trials << " trials): " << (r.pass() ? "pass" : "fail") << "; ";
    for (const auto& c : r.checks)
      if (!c.pass) o.fail(name + ": " + c.name + " " + c.witness);
    if (r.trials < 500) o.fail(name + ": fewer than 500 trials");
  }
  if (!have3 || !have5) o.fail("group axioms need corpus threefolds at q = 3 and q = 5");
}

void component_tags(const AcceptanceOptions& opt, Outcome& o) {
  int reports = 0;
  for (const auto& [name, r] : axiom_reports(opt)) {
    ++reports;
    const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const AxiomCheck& c) { return c.name == "component_tags"; });
    if (it == r.checks.end()) {
      o.fail(name + ": no component_tags check");
    } else if (!it->pass) {
      o.fail(name + ": " + it->witness);
    }
  }
  if (reports == 0) o.fail("no group to check");
  o.detail << "component_tags on " << reports << " groups";
}

void finite_field_verdicts(const AcceptanceOptions& opt, Outcome& o) {
  Rng rng(seed_for(opt, 9));
  const Field& F = Field::get(5);
  int rational = 0, inconsistent = 0;
  for (int i = 0; i < 200; ++i) {
    const GeneralSample s = sample_general_threefold(F, rng);
    try {
      const FiniteFieldVerdict v = decide_over_finite_field(s.nf);
      if (v.verdict == Verdict::Rational && v.verified) {
        ++rational;
      } else {
        o.fail("sample " + std::to_string(i) + ": unverified verdict");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InternalInconsistency) ++inconsistent;
      o.fail("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  o.detail << "Rational on " << rational << "/200, InternalInconsistency " << inconsistent;
}

QMat diagonal(std::initializer_list<int> d) {
  QMat m(d.size(), QVec(d.size(), 0));
  int i = 0;
  for (int x : d) {
    m[i][i] = x;
    ++i;
  }
  return m;
}

void rational_verdicts(const AcceptanceOptions& opt, Outcome& o) {
  bool node_seen = false, definite_seen = false;
  for (const auto& path : corpus_files(opt.corpus, "rational")) {
    const std::string name = name_of(path);
    const Input in = load_input(path);
    const RationalVerdict v = decide_over_rationals(*in.rational_cubic, in.rational_plane, RationalityOptions{});
    o.detail << name << ": " << to_string(v.verdict) << " (" << v.witness_kind << "); ";
    if (name == "node_example") {
      node_seen = true;
      if (v.verdict != Verdict::Rational || v.witness_kind != "node" || v.node != ZVec{1, 1, 1} || !v.verified)
        o.fail(name + ": expected Rational with node (1:1:1)");
    } else if (name == "definite_example") {
      definite_seen = true;
      if (v.verdict != Verdict::Irrational || v.obstruction.place != Place::Real || !v.obstruction.rechecked)
        o.fail(name + ": expected Irrational at R");
    }
  }
  if (!node_seen || !definite_seen) o.fail("rational corpus lacks node_example or definite_example");
  const LocalSolvability definite = local_solvability(diagonal({1, 1, 1, 1}));
  const LocalSolvability split = local_solvability(diagonal({1, 1, -1, -1}));
  const LocalSolvability seven = local_solvability(diagonal({1, 1, 1, -7}));
  o.detail << "local: definite " << definite.place_name() << ", split " << (split.solvable ? "solvable" : split.place_name())
           << ", 7 mod 8 " << seven.place_name();
  if (definite.solvable || definite.place != Place::Real) o.fail("definite form not obstructed at R");
  if (!split.solvable) o.fail("split form obstructed");
  if (seven.solvable || seven.place != Place::Prime || seven.prime != 2) o.fail("7 mod 8 form not obstructed at Q_2");
}

void fourfolds(const AcceptanceOptions& opt, Outcome& o) {
  int used = 0;
  for (const auto& path : corpus_files(opt.corpus, "fourfolds")) {
    const Input in = load_input(path);
    if (in.field.field().size() != 5) continue;
    ++used;
    const std::string name = name_of(path);
    const Field& F = in.field.field();
    const NormalizedFourfold nx = normalize_fourfold(*in.cubic, make_subspace(F, in.plane));
    const PlaneDiscriminant pd = plane_discriminant(nx);
    const auto duals = enumerate_points(F, 2);

    FiberScanOptions fo;
    fo.seed = seed_for(opt, 11);
    int transverse = 0, good = 0;
    for (const auto& f : fiber_scan(nx, duals, fo)) {
      if (!f.transverse) continue;
      ++transverse;
      if (f.cert.general() && f.equal) {
        ++good;
      } else {
        o.fail(name + " dual " + to_string(f.dual) + ": " + (f.error.empty() ? "#T != h" : f.error));
      }
    }
    if (transverse < 10) o.fail(name + ": fewer than 10 transverse lines");

    Rng rng(seed_for(opt, 11));
    int compatible = 0;
    for (int i = 0; i < 20; ++i) {
      const Point a = duals[rng.below(duals.size())];
      const bool ok = restrict_discriminant(nx, pd.delta, a).projectively_equal(discriminant(make_slice(nx, a).nf));
      compatible += ok;
      if (!ok) o.fail(name + ": slice compatibility at " + to_string(a));
    }

    int length4 = 0;
    for (const Point& a : duals) {
      const int len = compute_Z(make_slice(nx, a).nf).total_length();
      length4 += len == 4;
      if (len != 4) o.fail(name + ": tangency fiber over " + to_string(a) + " has length " + std::to_string(len));
    }
    o.detail << name << ": " << good << "/" << transverse << " transverse, compatible " << compatible << "/20, length 4 on "
             << length4 << "/" << duals.size() << "; ";
  }
  if (used == 0) o.fail("no corpus fourfold over F_5");
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "lines_in_P4", "exact count for q = 3, 5, 7; < 1 s each", 3.0, lines_in_p4},
      {2, "z_total_length", "length 4 exactly on 100 samples per q in {3, 5, 7}; < 10 s", 10.0, z_length},
      {3, "discriminant_and_models", "sextic and match_models on every corpus threefold; < 30 s", 30.0, discriminant_models},
      {4, "intersection_numbers", "2, 3, 1 exactly on >= 20 samples each at q = 5; < 120 s", 120.0, intersection_numbers},
      {5, "twenty_seven_lines", "27 lines exactly on >= 10 surfaces at q = 5", 0.0, twenty_seven_lines},
      {6, "boundary_decomposition", "every set law at depth 2 on every corpus threefold", 0.0, decomposition},
      {7, "torsor_suite", ">= 500 trials at q = 3, 5; #T = h for k = 1, 2; one h cross-check; < 600 s", 600.0, torsor_suite},
      {8, "component_tags", "component_tags check passes on every verified group", 0.0, component_tags},
      {9, "finite_field_rationality", "Rational on 200 F_5 samples, 0 InternalInconsistency; < 300 s", 300.0, finite_field_verdicts},
      {10, "rational_verdicts", "node (1:1:1), R obstruction, local places exact; < 10 s", 10.0, rational_verdicts},
      {11, "fourfold_fibration", ">= 10 transverse lines, 20 compatible slices, length-4 fibers at q = 5; < 900 s", 900.0, fourfolds},
  };
  return list;
}

CriterionResult run_one(const Criterion& c, const AcceptanceOptions& opt) {
  CriterionResult r{c.id, c.name, false, c.tolerance, {}, 0, c.limit_seconds};
  Outcome o;
  const auto start = Clock::now();
  try {
    c.body(opt, o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  std::string detail = o.detail.str();
  while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
  if (!o.correct) detail += (detail.empty() ? "" : "; ") + std::string("first failure: ") + o.witness;
  r.detail = detail;
  r.pass = o.correct;
  return r;
}

// Timings are excluded so that the bytes depend on the computation only.
std::string fingerprint(const std::vector<CriterionResult>& results) { return acceptance_json(results).dump(); }


// Each corpus input through its commands twice; fiber scans also with two threads.
std::pair<int, std::string> command_determinism(const AcceptanceOptions& opt) {
  int n = 0;
  std::string witness;
  auto twice = [&](JobOptions a, JobOptions b) {
    ++n;
    const std::string x = run(a).report.dump(), y = run(b).report.dump();
    if (x != y && witness.empty()) witness = a.command + " " + name_of(a.input);
  };
  for (const auto& path : corpus_files(opt.corpus, "threefolds")) {
    JobOptions j;
    j.command = "analyze-threefold";
    j.input = path;
    j.seed = opt.seed;
    twice(j, j);
  }
  for (const auto& path : corpus_files(opt.corpus, "fourfolds")) {
    JobOptions j;
    j.command = "fiber-scan";
    j.input = path;
    j.seed = opt.seed;
    JobOptions k = j;
    k.threads = 2;
    // The job echo records the thread count; compare the scan itself.
    ++n;
    const Json x = run(j).report, y = run(k).report;
    if (x.at("scan") != y.at("scan") && witness.empty()) witness = "fiber-scan threads " + name_of(path);
  }
  for (const auto& path : corpus_files(opt.corpus, "rational")) {
    JobOptions j;
    j.command = "rationality";
    j.input = path;
    twice(j, j);
  }
  return {n, witness};
}

}  // namespace

std::vector<std::string> corpus_files(const std::string& corpus, const std::string& kind) {
  std::vector<std::string> out;
  const std::filesystem::path dir = std::filesystem::path(corpus) / kind;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> results, raw;
  for (const auto& c : criteria()) {
    CriterionResult r = run_one(c, opt);
    raw.push_back(r);
    const bool correct = r.pass;
    r.pass = correct && (r.limit_seconds == 0 || r.seconds <= r.limit_seconds);
    if (correct && !r.pass) r.detail += "; exceeded the time limit";
    if (opt.on_result) opt.on_result(r);
    results.push_back(r);
  }
  if (opt.determinism) {
    CriterionResult r{12, "deterministic_reports", false,
                      "byte-identical criterion reports and command reports across two runs", {}, 0, 0};
    const auto start = Clock::now();
    // Time limits are left out: they are the one input that varies between runs.
    std::vector<CriterionResult> again;
    for (const auto& c : criteria()) again.push_back(run_one(c, opt));
    const bool same = fingerprint(raw) == fingerprint(again);
    std::string differing;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (raw[i].detail != again[i].detail || raw[i].pass != again[i].pass) differing += " " + std::to_string(raw[i].id);
    const auto [commands, command_witness] = command_determinism(opt);
    r.pass = same && command_witness.empty();
    r.detail = std::string("criteria 1-11 ") + (same ? "identical" : "differ in" + differing) + "; " +
               std::to_string(commands) + " command reports " + (command_witness.empty() ? "identical" : "differ: " + command_witness);
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (opt.on_result) opt.on_result(r);
    results.push_back(r);
  }
  return results;
}

Json acceptance_json(const std::vector<CriterionResult>& results) {
  Json out = Json::array();
  for (const auto& r : results) {
    Json j;
    j["id"] = r.id;
    j["name"] = r.name;
    j["pass"] = r.pass;
    j["tolerance"] = r.tolerance;
    j["detail"] = r.detail;
    out.push_back(j);
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail << " (" << r.tolerance << "; ";
  s.setf(std::ios::fixed);
  s.precision(1);
  s << r.seconds << "s)";
  return s.str();
}

}  // namespace fanoscope::cli
