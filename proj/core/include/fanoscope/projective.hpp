#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fanoscope/field.hpp"
#include "fanoscope/forms.hpp"
#include "fanoscope/linalg.hpp"

namespace fanoscope {

constexpr int kMaxCoords = 8;

// Homogeneous coordinates with the first nonzero entry equal to 1.
struct Point {
  std::uint8_t n = 0;
  std::array<Elt, kMaxCoords> x{};

  Elt operator[](int i) const { return x[i]; }
  Vec vec() const { return Vec(x.begin(), x.begin() + n); }
  auto operator<=>(const Point&) const = default;
};

// 2 x n matrix in reduced row echelon form; equal lines have equal matrices.
struct Line {
  std::uint8_t n = 0;
  std::array<Elt, 2 * kMaxCoords> m{};

  Elt at(int r, int c) const { return m[r * n + c]; }
  Vec row(int r) const { return Vec(m.begin() + r * n, m.begin() + (r + 1) * n); }
  auto operator<=>(const Line&) const = default;
};

struct LineHash {
  std::size_t operator()(const Line& L) const noexcept;
};

// r x n matrix in reduced row echelon form; projective dimension r - 1.
struct Subspace {
  int n = 0;
  Mat rows;

  int dim() const { return static_cast<int>(rows.size()) - 1; }
  bool operator==(const Subspace&) const = default;
};

// Throws Degenerate on the zero vector.
Point make_point(const Field& F, std::span<const Elt> v);
// Throws Degenerate when a and b are dependent.
Line make_line(const Field& F, const Vec& a, const Vec& b);
Line line_through(const Field& F, const Point& a, const Point& b);
Subspace make_subspace(const Field& F, Mat rows);

Vec point_on(const Field& F, const Line& L, Elt s, Elt t);
bool contains(const Field& F, const Line& L, const Vec& v);
bool contains(const Field& F, const Subspace& S, const Vec& v);
bool contains(const Field& F, const Subspace& S, const Line& L);
// Coordinates of v in the RREF basis of S (v must lie in S).
Vec subspace_coords(const Subspace& S, const Vec& v);

Subspace span(const Field& F, const std::vector<Vec>& vectors);
Subspace span(const Field& F, const Line& L, const Vec& v);
Subspace span(const Field& F, const Line& L, const Line& M);

// True iff the stacked 4 x n matrix has rank at most 3.
bool line_meets(const Field& F, const Line& L, const Line& M);
// The common point of two distinct meeting lines.
std::optional<Point> meet_point(const Field& F, const Line& L, const Line& M);

Point map_point(const Embedding& e, const Point& p);
Line map_line(const Embedding& e, const Line& L);
// Inverse of map_line when every entry lies in the subfield.
std::optional<Line> restrict_line(const Embedding& e, const Line& L);
std::optional<Point> restrict_point(const Embedding& e, const Point& p);
// Frobenius a -> a^(p^j) applied to every coordinate.
Line frobenius(const Field& F, const Line& L, unsigned j);
Point frobenius(const Field& F, const Point& p, unsigned j);

// Visits every line of P^n(F) once, in canonical RREF order (pivot pair,
// then free entries as an odometer in element-code order).
void for_each_line(const Field& F, int n, const std::function<void(const Line&)>& fn);
std::vector<Line> enumerate_lines(const Field& F, int n);
std::uint64_t line_count(std::uint64_t q, int n);

void for_each_point(const Field& F, int n, const std::function<void(const Point&)>& fn);
std::vector<Point> enumerate_points(const Field& F, int n);
std::uint64_t point_count(std::uint64_t q, int n);
// Points of the line L over its field, in parameter order (1:l), then (0:1).
std::vector<Point> points_of_line(const Field& F, const Line& L);

// f(s*row0 + t*row1) as a binary form of degree deg f.
BinaryForm restrict_to_line(const HomogeneousForm& f, const Line& L);
bool vanishes_on_line(const HomogeneousForm& f, const Line& L);

// Form in dim S + 1 variables obtained from the RREF basis of S.
HomogeneousForm restrict_form(const HomogeneousForm& f, const Subspace& S);

struct Residual {
  Line line;
  int multiplicity = 1;  // exponent of the residual factor in l_L l_M l_N
};
// Third line of the plane cubic section through L and M; L == M divides by
// the square of l_L.
Residual residual_line(const HomogeneousForm& cubic, const Subspace& plane, const Line& L, const Line& M);

// Exact quotient g / l for a linear form l, or nullopt when l does not divide g.
std::optional<HomogeneousForm> divide_by_linear(const HomogeneousForm& g, const HomogeneousForm& l);

// Element codes, e.g. "(1:0:3)" and "[(1:0:3),(0:1:2)]".
std::string to_string(const Point& p);
std::string to_string(const Line& L);

// Linear form vanishing on the line of P^2 through a and b (cross product).
Vec cross(const Field& F, const Vec& a, const Vec& b);

}  // namespace fanoscope
