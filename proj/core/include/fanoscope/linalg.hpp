#pragma once

#include <vector>

#include "fanoscope/field.hpp"

namespace fanoscope {

using Vec = std::vector<Elt>;
using Mat = std::vector<Vec>;

// In-place reduced row echelon form; zero rows are dropped. Returns the rank.
int rref(const Field& F, Mat& rows);
int rank(const Field& F, Mat rows);
// Basis of {v : rows * v = 0} for vectors of length ncols, in RREF order of
// the free columns.
Mat kernel(const Field& F, Mat rows, int ncols);
Elt determinant(const Field& F, Mat m);
// Throws DivisionByZero when singular.
Mat inverse(const Field& F, const Mat& m);
Mat multiply(const Field& F, const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat identity(int n);
Vec apply(const Field& F, const Mat& a, const Vec& v);
Elt dot(const Field& F, const Vec& a, const Vec& b);
Vec axpy(const Field& F, Elt s, const Vec& a, Elt t, const Vec& b);  // s a + t b

}  // namespace fanoscope
