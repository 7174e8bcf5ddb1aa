#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "fanoscope/forms.hpp"
#include "fanoscope/linalg.hpp"
#include "fanoscope/projective.hpp"
#include "fanoscope/threefold.hpp"

namespace fanoscope {

// Fibers of the quadric fibration are indexed by P^1(K): (1:l) has index
// code(l) and (0:1) has index |K|. The fiber over (s:t) lies in the
// hyperplane {s x1 = t x0}, parametrized by (u, x2, x3, x4) with x0 = s u,
// x1 = t u; its residual quadric is R = s Q0(su, tu, x) + t Q1(su, tu, x).
using FiberIndex = std::uint32_t;

std::array<Elt, 2> fiber_param(const Field& K, FiberIndex i);
FiberIndex fiber_index(const Field& K, Elt s, Elt t);
std::uint32_t fiber_count(const Field& K);

// (u, x2, x3, x4) -> (s u, t u, x2, x3, x4).
Vec fiber_to_ambient(const Field& K, Elt s, Elt t, const Vec& v);
// Inverse on the hyperplane of the fiber.
Vec ambient_to_fiber(const Field& K, Elt s, Elt t, const Vec& x);
// Fiber of a point off P.
FiberIndex fiber_of_point(const Field& K, const Vec& x);

// Symmetric 4x4 matrix of binary forms: entry (0,0) is cubic, (0,j) quadratic,
// (i,j) linear in (s,t); evaluating gives the Gram matrix of R_{s,t}.
struct PencilMatrix {
  const Field* field = nullptr;
  std::vector<std::vector<BinaryForm>> entries;

  Mat evaluate(Elt s, Elt t) const;
};

PencilMatrix pencil_matrix(const NormalizedThreefold& nf);
Mat fiber_matrix(const NormalizedThreefold& nf, Elt s, Elt t);
// det of the pencil matrix, a binary sextic. Throws NotGeneral when zero.
BinaryForm discriminant(const NormalizedThreefold& nf);

// First point of the quadric v^T M v = 0 in P^3(K) in canonical order.
std::optional<Vec> first_quadric_point(const Field& K, const Mat& M);
// Every point of the quadric over K.
std::vector<Vec> quadric_points(const Field& K, const Mat& M);
// Lines (as pairs of spanning vectors) through the point y of the quadric,
// defined over K; empty when the tangent section has no K-rational line.
// Throws Degenerate when y is singular on the quadric.
std::vector<std::array<Vec, 2>> quadric_lines_through(const Field& K, const Mat& M, const Vec& y);

struct RulingPoint {
  FiberIndex fiber = 0;
  std::uint8_t cls = 0;
  auto operator<=>(const RulingPoint&) const = default;
};

struct Fiber {
  std::array<Elt, 2> param{};
  Mat gram;
  int rank = 0;
  int chi = 0;                 // quadratic character of det(gram)
  std::optional<Vec> vertex;   // rank 3: the cone point in fiber coordinates
  std::vector<Line> reps;      // ambient representative of each K-rational ruling class

  int num_classes() const { return static_cast<int>(reps.size()); }
};

// Throws NotGeneral on rank <= 2. Smooth fibers with split rulings get two
// classes represented by the two lines through the first quadric point,
// ordered by Line order; cones get one class.
Fiber make_fiber(const NormalizedThreefold& nf, FiberIndex i);

// Class index of an ambient line lying in the fiber quadric: same class as a
// representative iff equal or disjoint. Throws InvalidInput when the line is
// not on the fiber.
int class_of_line(const Field& K, const Fiber& fib, const Line& L);

// Lines of the fiber quadric through an ambient point of it, defined over K.
std::vector<Line> fiber_lines_through(const Field& K, const Fiber& fib, const Vec& x);

// Slow path: all K-lines of the fiber quadric partitioned by the
// equal-or-disjoint rule; throws InternalInconsistency if the rule is not a
// congruence.
std::vector<std::vector<Line>> rulings_of_fiber(const NormalizedThreefold& nf, FiberIndex i);

// The genus 2 curve y^2 = disc(s,t) over extensions of the base field.
struct HyperellipticModel {
  BinaryForm disc;
};

// Sum over P^1(F_{q^k}) of 1 + chi(disc).
std::int64_t count_points_C(const HyperellipticModel& C, unsigned k);
// Independent count: loop over (s:t) and every y with y^2 = disc(s,t).
std::int64_t count_points_C_naive(const HyperellipticModel& C, unsigned k);

struct ZetaData {
  std::int64_t q = 0;
  std::int64_t N1 = 0, N2 = 0;
  std::int64_t c1 = 0, c2 = 0;
  std::int64_t h = 0;          // P(1) = #Pic^0(F_q)
  std::int64_t h2 = 0;         // P(1) P(-1) = #Pic^0(F_{q^2})
};

// Throws InternalInconsistency when the Weil bounds fail.
ZetaData zeta_from_counts(std::int64_t q, std::int64_t N1, std::int64_t N2);
ZetaData zeta(const HyperellipticModel& C);

// #Pic^0(F_q) from effective divisors: every degree-2 class other than the
// canonical one has exactly one effective member, so h = #C^(2)(F_q) - q with
// #C^(2)(F_q) = (N1^2 + N2) / 2 counted by the naive loop.
std::int64_t class_number_by_effective_divisors(const HyperellipticModel& C);

// Operational C(F_{q^k}): ruling classes found geometrically on every fiber.
struct OperationalCurve {
  std::vector<RulingPoint> points;
  std::vector<int> classes_per_fiber;
};
OperationalCurve operational_curve(const NormalizedThreefold& nf_over_K);

// Point counts agree for k = 1, 2 and fiberwise degrees are 2 off the
// discriminant and 1 on it.
bool match_models(const NormalizedThreefold& nf, const HyperellipticModel& C);

}  // namespace fanoscope
