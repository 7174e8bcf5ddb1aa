#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fanoscope/pencil.hpp"
#include "fanoscope/projective.hpp"
#include "fanoscope/sampling.hpp"
#include "fanoscope/threefold.hpp"

namespace fanoscope {

enum class LineTag : std::uint8_t { InPlane, MeetsPlaneOnce, DisjointFromPlane };

std::string_view to_string(LineTag tag);

struct ClassifiedLine {
  Line line;
  LineTag tag = LineTag::InPlane;
  std::optional<Point> meet;          // MeetsPlaneOnce: L cap P
  std::optional<RulingPoint> ruling;  // MeetsPlaneOnce: fiber and class containing L
  unsigned field_degree = 1;          // over the base field of the threefold
};

// Lines of Y = {x0 Q0 + x1 Q1 = 0} over K = F_{q^k}, sorted by (tag, line).
// InPlane: every line of P. MeetsPlaneOnce: K-lines of the fiber quadrics off
// P. DisjointFromPlane: lines spanned by (1, 0, a) and (0, 1, b) with the four
// coefficients of f(sA + tB) equal to zero.
std::vector<ClassifiedLine> enumerate_fano(const NormalizedThreefold& nf, unsigned k);
// Independent check: every line of P^4(K) tested with vanishes_on_line.
std::vector<Line> enumerate_fano_brute_force(const NormalizedThreefold& nf, unsigned k);
// Lines spanned by (1, 0, a) and (0, 1, b) on Y, over the field of nf.
std::vector<Line> disjoint_lines(const NormalizedThreefold& nf);

// Points of the torsor T: a line disjoint from P, a line through exactly one
// point z of Z that is not in P, or z itself.
enum class TKind : std::uint8_t { U, Cz, Z };

struct TPoint {
  TKind kind = TKind::U;
  Line line;  // zero for kind Z
  Point z;    // zero for kind U
  auto operator<=>(const TPoint&) const = default;
};

struct PhiResult {
  const Field* field = nullptr;   // field of the two lines: K, or its quadratic extension
  std::array<Line, 2> lines;      // M, N through z, sorted
  std::array<RulingPoint, 2> pair;  // classes in the model over *field
  int multiplicity = 1;           // 2 when M = N
};

// Lines, sections and involutions over one field K containing the base field.
// Ruling points are indexed in K's P^1; an extension model over K^2 is built on
// demand for quantities defined only there.
class FanoModel {
 public:
  FanoModel(const NormalizedThreefold& nf, const Field& K);
  FanoModel(const FanoModel&) = delete;
  FanoModel& operator=(const FanoModel&) = delete;
  ~FanoModel();

  const Field& K() const { return *K_; }
  const Field& base() const { return *base_; }
  const NormalizedThreefold& base_threefold() const { return base_nf_; }
  const NormalizedThreefold& threefold() const { return nf_; }
  const Fiber& fiber(FiberIndex i) const { return fibers_[i]; }
  const std::vector<Point>& z_points() const { return z_; }
  const std::vector<RulingPoint>& curve_points() const { return curve_; }
  // Model over the quadratic extension of K, built on first use.
  const FanoModel& extension() const;

  RulingPoint conjugate(RulingPoint c) const;
  // Image of c under a -> a^(p^j), through a representative line.
  RulingPoint frobenius(RulingPoint c, unsigned j) const;
  bool is_z(const Point& p) const;
  // Fiber and class of a line meeting P once.
  RulingPoint ruling_of(const Line& L) const;
  ClassifiedLine classify(const Line& L) const;

  // The line of class c through z (the line through z and the vertex on a cone).
  Line tau(const Point& z, RulingPoint c) const;
  // Every K-line through z lying in some fiber quadric, P included.
  std::vector<Line> curve_of_lines(const Point& z) const;
  // The line of class c meeting L, for L disjoint from P.
  Line sigma(const Line& L, RulingPoint c) const;
  // Residual pair of span(L, z); throws PlaneContained if the plane lies on Y.
  PhiResult phi(const Point& z, const Line& L) const;
  // Residual line of span(tau_z(c), tau_z(d)), tangent construction when c = d;
  // nullopt when both lines lie in P.
  std::optional<Line> psi(const Point& z, RulingPoint c, RulingPoint d) const;
  // The plane through tau_z(c) tangent to the cone of lines through z.
  Subspace tangent_plane(const Point& z, const Line& line) const;

  TPoint classify_t(const Line& L) const;  // L must be a T-point line
  TPoint j(RulingPoint c, const TPoint& x) const;
  // Every K-point of T, sorted.
  std::vector<TPoint> torsor_points() const;

  TPoint map_up(const TPoint& x) const;                     // into extension()
  std::optional<TPoint> restrict_down(const TPoint& x) const;  // from extension()

 private:
  TPoint from_residual(const Line& N) const;
  Point other_z_on(const Line& L, const Point& z) const;

  const Field* base_;
  const Field* K_;
  NormalizedThreefold base_nf_;
  NormalizedThreefold nf_;
  std::vector<Fiber> fibers_;
  std::vector<Point> z_;
  std::vector<RulingPoint> curve_;
  std::vector<HomogeneousForm> grad_;
  mutable std::unique_ptr<FanoModel> ext_;
};

// Lines of P contained in some fiber quadric, over K.
std::vector<Line> fano_plane_lines(const FanoModel& m);

struct SetCheck {
  std::string name;
  bool pass = true;
  std::string witness;  // first counterexample
};

struct FanoDecomposition {
  std::uint64_t q = 0;  // size of the field of the model
  std::size_t pstar = 0, fcomponent = 0, u_interior = 0;
  std::size_t f_cap_pstar = 0;
  std::size_t boundary_zstar = 0, boundary_cz = 0;
  std::size_t ubar = 0;
  std::size_t torsor = 0;
  std::vector<SetCheck> checks;

  bool pass() const;
};

// Builds the point sets over the model's field and checks the boundary laws.
FanoDecomposition decompose(const FanoModel& m);

// Lines of the cubic surface f|S over K, for a 3-space S of P^4; found by
// splitting the residual conics in the planes through lines already known,
// starting from `seed`. Throws Degenerate when a residual conic has rank <= 1.
std::vector<Line> cubic_surface_lines(const HomogeneousForm& f, const Subspace& S, const Line& seed);
// K-lines of the cubic surface meeting X (X itself excluded).
std::vector<Line> lines_meeting(const HomogeneousForm& f, const Subspace& S, const Line& X);

struct SurfaceLines {
  unsigned depth = 0;       // k with every line defined over F_{q^k}; 0 when not split by k = 4
  std::vector<Line> lines;  // over F_{q^depth}
  Line L, M, ell;           // the two sampled lines and P cap span(L, M), mapped up
};

// The cubic surface span(L, M) cap Y for skew L, M disjoint from P, scanned
// over F_{q^k}, k = 1..4, until 27 lines are found. Throws Degenerate for a
// singular section.
SurfaceLines surface_lines(const NormalizedThreefold& nf, const Line& L, const Line& M);

struct IntersectionReport {
  std::vector<int> sigma_tau;    // lines through z meeting L, with multiplicity
  std::vector<int> sigma_sigma;  // lines meeting L, M and P
  std::vector<int> tau_tau;      // common lines of C_z and C_w
  std::vector<int> surface_line_counts;
  std::vector<unsigned> split_depths;
  int resampled = 0;
  int scan_depth = 4;

  bool pass() const;
};

// Samples disjoint lines and nodes of one threefold; nodes of degree <= 2 are
// used for sigma.tau and pairs of nodes over the splitting field of Z for
// tau.tau.
IntersectionReport verify_intersection_numbers(const NormalizedThreefold& nf, int samples, Rng& rng);

}  // namespace fanoscope
