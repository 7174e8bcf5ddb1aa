#include <algorithm>

#include "fanoscope/error.hpp"
#include "fanoscope/pencil.hpp"
#include "fanoscope/threefold.hpp"

namespace fanoscope {

bool structural_unique_plane(const NormalizedThreefold& nfK, std::string* detail) {
  const Field& K = nfK.F();
  std::vector<Mat> grams;
  for (FiberIndex i = 0; i < fiber_count(K); ++i) {
    const auto [s, t] = fiber_param(K, i);
    grams.push_back(fiber_matrix(nfK, s, t));
    if (rank(K, grams.back()) <= 2) {
      if (detail) *detail = "fiber quadric of rank <= 2 over F_" + std::to_string(K.size());
      return false;
    }
  }
  for (const Point& z : z_points_over(nfK, K)) {
    const Vec zf{0, z[2], z[3], z[4]};
    std::vector<std::vector<Line>> through;
    for (FiberIndex i = 0; i < fiber_count(K) && through.size() < 2; ++i) {
      if (apply(K, grams[i], zf) == Vec(4, 0)) continue;  // z is the cone point
      const auto [s, t] = fiber_param(K, i);
      std::vector<Line> lines;
      for (const auto& l : quadric_lines_through(K, grams[i], zf)) {
        lines.push_back(make_line(K, fiber_to_ambient(K, s, t, l[0]), fiber_to_ambient(K, s, t, l[1])));
      }
      through.push_back(lines);
    }
    if (through.size() < 2) continue;
    for (const Line& a : through[0]) {
      for (const Line& b : through[1]) {
        const Subspace S = span(K, a, b);
        const bool is_P = std::all_of(S.rows.begin(), S.rows.end(), [](const Vec& r) { return r[0] == 0 && r[1] == 0; });
        if (!is_P && restrict_form(nfK.f, S).is_zero()) {
          if (detail) *detail = "second plane through a point of Z over F_" + std::to_string(K.size());
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

bool singular_point_off_plane(const NormalizedThreefold& nf) {
  const Field& F = nf.F();
  const auto grad = nf.f.gradient();
  bool found = false;
  for_each_point(F, 4, [&](const Point& p) {
    if (found || (p[0] == 0 && p[1] == 0)) return;
    const Vec v = p.vec();
    // Euler's relation fails in characteristic 3, so f(p) = 0 is tested too.
    found = nf.f.evaluate(v) == 0 && std::all_of(grad.begin(), grad.end(), [&](const HomogeneousForm& g) { return g.evaluate(v) == 0; });
  });
  return found;
}

}  // namespace

GeneralityCertificate certify_generality(const NormalizedThreefold& nf, int scan_depth) {
  GeneralityCertificate cert;
  cert.plane_scan_depth = std::clamp(scan_depth, 1, 2);
  auto fail = [&](const std::string& why) {
    if (cert.detail.empty()) cert.detail = why;
  };
  try {
    const SingularLocusZ Z = compute_Z(nf);
    cert.Z_zero_dimensional = true;
    cert.Z_reduced = Z.reduced();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotGeneral) throw;
    fail(std::string("Z: ") + e.what());
  }
  try {
    cert.discriminant_reduced = discriminant(nf).is_reduced();
    if (!cert.discriminant_reduced) fail("discriminant has a repeated root");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotGeneral) throw;
    fail(std::string("discriminant: ") + e.what());
  }
  cert.Y_smooth_off_P = cert.discriminant_reduced && !singular_point_off_plane(nf);
  if (cert.discriminant_reduced && !cert.Y_smooth_off_P) fail("rational singular point off P");

  const auto planes = planes_on_cubic(nf.f);
  cert.unique_plane = planes.size() == 1;
  if (!cert.unique_plane) fail("another plane over F_" + std::to_string(nf.F().size()));
  if (cert.unique_plane && cert.plane_scan_depth >= 2 && cert.Z_zero_dimensional) {
    const Field& K = Field::get(nf.F().characteristic(), 2 * nf.F().degree());
    std::string why;
    cert.unique_plane = structural_unique_plane(base_change(nf, K), &why);
    if (!cert.unique_plane) fail(why);
  }
  return cert;
}

}  // namespace fanoscope
