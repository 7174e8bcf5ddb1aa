#pragma once

#include <string>
#include <vector>

#include "fanoscope/forms.hpp"
#include "fanoscope/linalg.hpp"
#include "fanoscope/projective.hpp"

namespace fanoscope {

// Cubic threefold Y = {x0 Q0 + x1 Q1 = 0} in P^4 containing P = {x0 = x1 = 0}.
struct NormalizedThreefold {
  const Field* field = nullptr;
  Mat change;  // 5x5, original coordinates = change * normalized coordinates
  HomogeneousForm f;
  HomogeneousForm Q0;  // monomials of f divisible by x0, divided by x0
  HomogeneousForm Q1;  // remaining monomials, each divisible by x1, divided by x1

  const Field& F() const { return *field; }
  // The conics Q0|P and Q1|P in the coordinates (x2, x3, x4).
  HomogeneousForm conic0() const;
  HomogeneousForm conic1() const;
};

// Moves P to {x0 = x1 = 0}. The first two new coordinates are the standard
// basis vectors at the non-pivot columns of P's RREF, so P = {x0 = x1 = 0}
// gives the identity change. Throws NotContained when P is not on the cubic.
NormalizedThreefold normalize(const HomogeneousForm& cubic, const Subspace& plane);
// f = x0 Q0 + x1 Q1 re-split by the monomial rule; identity change.
NormalizedThreefold from_quadrics(const HomogeneousForm& Q0, const HomogeneousForm& Q1);
// Same threefold with coefficients mapped into an extension K.
NormalizedThreefold base_change(const NormalizedThreefold& nf, const Field& K);

struct ZPoint {
  Point point;  // ambient coordinates (0, 0, x2, x3, x4) over the working field
  int multiplicity = 1;
  unsigned degree = 1;  // degree of the minimal field of definition over the base
};

struct SingularLocusZ {
  const Field* field = nullptr;  // working field containing every point
  std::vector<ZPoint> points;    // rational points first, then Galois orbits by degree

  bool reduced() const;
  int total_length() const;
  std::size_t rational_count() const;
};

// Z = {x0 = x1 = Q0 = Q1 = 0} with intersection multiplicities from a
// resultant of the two conics. Throws NotGeneral for a zero conic or a
// common component.
SingularLocusZ compute_Z(const NormalizedThreefold& nf);

// Points of Z defined over K (an extension of nf's field), sorted.
std::vector<Point> z_points_over(const NormalizedThreefold& nf, const Field& K);

struct GeneralityCertificate {
  bool unique_plane = false;
  bool Z_zero_dimensional = false;
  bool discriminant_reduced = false;
  bool Y_smooth_off_P = false;
  bool Z_reduced = false;  // not part of generality; required by the torsor module
  int plane_scan_depth = 0;
  std::string detail;  // first failure, empty when all flags hold

  bool general() const { return unique_plane && Z_zero_dimensional && discriminant_reduced && Y_smooth_off_P; }
};

// Plane uniqueness is scanned over F_{q^k} for k <= scan_depth (at most 2):
// exhaustively at k = 1 and by structural_unique_plane at k = 2.
GeneralityCertificate certify_generality(const NormalizedThreefold& nf, int scan_depth = 2);

// Structural scan over the field of nf_over_K: a second plane meets P in a
// line (it then lies in a fiber quadric of rank <= 2) or in a point z of Z
// (it is then spanned by its lines through z in any two fibers where z is a
// smooth point of the quadric).
bool structural_unique_plane(const NormalizedThreefold& nf_over_K, std::string* detail = nullptr);

// Brute force: every plane of P^{n-1}(F) on the cubic, sorted by RREF rows.
std::vector<Subspace> planes_on_cubic(const HomogeneousForm& f);

}  // namespace fanoscope
