#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fanoscope/forms.hpp"
#include "fanoscope/linalg.hpp"
#include "fanoscope/pencil.hpp"
#include "fanoscope/projective.hpp"
#include "fanoscope/sampling.hpp"
#include "fanoscope/threefold.hpp"
#include "fanoscope/torsor.hpp"

namespace fanoscope {

// Cubic fourfold X = {x0 Q0 + x1 Q1 + x2 Q2 = 0} in P^5 containing
// P = {x0 = x1 = x2 = 0}. Points of the complementary plane P^perp are (s:t:u);
// a dual point a = (a0:a1:a2) names the line {a0 s + a1 t + a2 u = 0} of P^perp
// and the hyperplane {a0 x0 + a1 x1 + a2 x2 = 0} containing P.
struct NormalizedFourfold {
  const Field* field = nullptr;
  Mat change;  // 6x6, original coordinates = change * normalized coordinates
  HomogeneousForm f;
  std::array<HomogeneousForm, 3> Q;  // Q[i]: monomials divisible by x_i and no earlier x_j, divided by x_i

  const Field& F() const { return *field; }
};

// Moves P to {x0 = x1 = x2 = 0} by the rule of normalize(). Throws
// NotContained when P is not on the cubic.
NormalizedFourfold normalize_fourfold(const HomogeneousForm& cubic, const Subspace& plane);
NormalizedFourfold fourfold_from_quadrics(const HomogeneousForm& Q0, const HomogeneousForm& Q1, const HomogeneousForm& Q2);
NormalizedFourfold base_change(const NormalizedFourfold& nx, const Field& K);
// Uniform Q0, Q1, Q2 in 6 variables (before the monomial re-split).
NormalizedFourfold random_fourfold(const Field& F, Rng& rng);

// Gram matrix of the residual quadric over (s:t:u) in the fiber coordinates
// (v, x3, x4, x5), x_i = sigma_i v for i < 3. Built by substitution, not from
// the symbolic pencil.
Mat fourfold_fiber_matrix(const NormalizedFourfold& nx, const Vec& stu);

struct PlaneDiscriminant {
  HomogeneousForm delta;  // ternary sextic in (s, t, u)
  int scan_depth = 0;     // smoothness checked over F_{q^k}, k <= scan_depth
  bool smooth = false;
  std::optional<Point> singular_point;  // over F_{q^k} for the first failing k
  unsigned singular_degree = 0;
};

// Exact symbolic determinant of the fiber matrix. Throws NotGeneral when it
// vanishes identically.
PlaneDiscriminant plane_discriminant(const NormalizedFourfold& nx, int scan_depth = 3);

// Delta restricted to the line of the dual point, parametrized by the slice
// basis: (s':t') -> s' k0 + t' k1.
BinaryForm restrict_discriminant(const NormalizedFourfold& nx, const HomogeneousForm& delta, const Point& dual);

// Hyperplane section X cap H for H = {a . (x0, x1, x2) = 0}, in coordinates
// (y0, y1, x3, x4, x5) with (x0, x1, x2) = y0 k0 + y1 k1 for the kernel basis
// (k0, k1) of a. P is {y0 = y1 = 0} in the slice.
struct Slice {
  Point dual;
  std::array<Vec, 2> basis;
  Mat embed;  // 6x5, ambient = embed * slice coordinates
  NormalizedThreefold nf;
};

Slice make_slice(const NormalizedFourfold& nx, const Point& dual);
Vec slice_to_ambient(const Slice& s, const Vec& y);
// Slice coordinates of an ambient point of H; throws InvalidInput off H.
Vec ambient_to_slice(const Slice& s, const Vec& x);

// Dual point of T_x X cap P^perp for x in P, i.e. (Q0(x) : Q1(x) : Q2(x)).
// Throws SingularFourfold when X is singular at x.
Point tangency_map(const NormalizedFourfold& nx, const Vec& x);

struct PiValue {
  bool indeterminate = false;
  std::optional<Point> value;
  std::optional<Point> meet;  // L cap P for lines meeting P once
  // L in P: g restricted to L as three binary quadratics (common factor
  // removed), its degree as a map, and the image of L's rational points.
  unsigned pencil_degree = 0;
  std::vector<Point> pencil;
};

// Throws InvalidInput when L is not on X.
PiValue pi_of_line(const NormalizedFourfold& nx, const Line& L);

// Every line of X over F, by testing every line of P^5(F).
std::vector<Line> fourfold_lines(const NormalizedFourfold& nx);

// Smoothness of X by gradient scan over F_{q^k}, k <= depth (depth <= 2).
struct FourfoldCertificate {
  int smooth_scan_depth = 0;
  bool smooth = false;
  std::optional<PlaneDiscriminant> disc;  // empty when the discriminant vanishes identically
  std::string detail;

  bool general() const { return smooth && disc && disc->smooth; }
};

FourfoldCertificate certify_fourfold(const NormalizedFourfold& nx, int smooth_depth = 2, int disc_depth = 3);

// Rejection sampling until certify_fourfold passes. Throws
// InternalInconsistency after max_attempts.
NormalizedFourfold sample_general_fourfold(const Field& F, Rng& rng, int max_attempts = 1000);

struct FiberScanOptions {
  int generality_depth = 2;     // plane scan depth of the slice certificate
  bool extension_count = false;  // also compare #T(F_{q^2}) with h2
  int axiom_trials = 0;          // full torsor verification when > 0 and Z is reduced
  int threads = 1;
  std::uint64_t seed = 1;
};

struct FiberReport {
  Point dual;
  bool transverse = false;
  std::string degeneration;  // empty when transverse
  bool sliced = false;       // the slice pipeline ran
  GeneralityCertificate cert;
  ZetaData zeta;
  std::int64_t torsor_count = -1;
  std::int64_t torsor_count2 = -1;  // over F_{q^2}, when requested
  bool equal = false;                // #T(F_q) = h (and #T(F_{q^2}) = h2 when requested)
  std::optional<GroupAxiomReport> axioms;
  std::string error;  // slice failure, recorded and not fatal
};

// Runs the slice pipeline for each dual point; reports follow the input order.
std::vector<FiberReport> fiber_scan(const NormalizedFourfold& nx, const std::vector<Point>& duals,
                                    const FiberScanOptions& opt = {});

// Header plus one row per report: dual, transverse, N1, N2, h, T, equal.
std::string fiber_scan_csv(const std::vector<FiberReport>& reports);

}  // namespace fanoscope
