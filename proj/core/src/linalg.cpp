#include "fanoscope/linalg.hpp"

#include "fanoscope/error.hpp"

namespace fanoscope {

int rref(const Field& F, Mat& rows) {
  if (rows.empty()) return 0;
  const int ncols = static_cast<int>(rows[0].size());
  int r = 0;
  for (int c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i) {
      if (rows[i][c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const Elt inv = F.inv(rows[r][c]);
    for (auto& v : rows[r]) v = F.mul(v, inv);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Elt f = rows[i][c];
      for (int j = c; j < ncols; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    ++r;
  }
  rows.resize(r);
  return r;
}

int rank(const Field& F, Mat rows) { return rref(F, rows); }

Mat kernel(const Field& F, Mat rows, int ncols) {
  rref(F, rows);
  std::vector<int> pivot_of_col(ncols, -1);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    for (int c = 0; c < ncols; ++c) {
      if (rows[i][c] != 0) {
        pivot_of_col[c] = i;
        break;
      }
    }
  }
  Mat basis;
  for (int free = 0; free < ncols; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    Vec v(ncols, 0);
    v[free] = 1;
    for (int c = 0; c < ncols; ++c) {
      if (pivot_of_col[c] >= 0) v[c] = F.neg(rows[pivot_of_col[c]][free]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Elt determinant(const Field& F, Mat m) {
  const int n = static_cast<int>(m.size());
  Elt det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = F.neg(det);
    }
    det = F.mul(det, m[c][c]);
    const Elt inv = F.inv(m[c][c]);
    for (int i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Elt f = F.mul(m[i][c], inv);
      for (int j = c; j < n; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[c][j]));
    }
  }
  return det;
}

Mat inverse(const Field& F, const Mat& m) {
  const int n = static_cast<int>(m.size());
  Mat aug(n, Vec(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  if (rref(F, aug) < n) throw Error(ErrorCode::DivisionByZero, "singular matrix");
  for (int i = 0; i < n; ++i) {
    if (aug[i][i] != 1) throw Error(ErrorCode::DivisionByZero, "singular matrix");
  }
  Mat inv(n, Vec(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  }
  return inv;
}

Mat multiply(const Field& F, const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat c(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] = F.add(c[i][j], F.mul(a[i][l], b[l][j]));
    }
  }
  return c;
}

Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

Mat identity(int n) {
  Mat m(n, Vec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Vec apply(const Field& F, const Mat& a, const Vec& v) {
  Vec out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot(F, a[i], v);
  return out;
}

Elt dot(const Field& F, const Vec& a, const Vec& b) {
  Elt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
  return s;
}

Vec axpy(const Field& F, Elt s, const Vec& a, Elt t, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = F.add(F.mul(s, a[i]), F.mul(t, b[i]));
  return out;
}

}  // namespace fanoscope
