#ifndef HKB_LINALG_HPP
#define HKB_LINALG_HPP

// Dense linear algebra over a finite field: row reduction, inverses,
// determinants and null spaces. Matrices are small (at most 8x8 here).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hkb/error.hpp"
#include "hkb/gf.hpp"
#include "hkb/random.hpp"

namespace hkb {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<Elem>>& rs) {
    Matrix m(rs.size(), rs.empty() ? 0 : rs.front().size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].size() != m.cols) throw error(errc::dimension_mismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i][j];
    }
    return m;
  }

  Elem& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  std::span<const Elem> row(std::size_t i) const { return {a.data() + i * cols, cols}; }
  std::vector<Elem> row_vector(std::size_t i) const { return {a.begin() + i * cols, a.begin() + (i + 1) * cols}; }

  Matrix transpose() const {
    Matrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix&) const = default;
};

inline Matrix multiply(const Field& f, const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw error(errc::dimension_mismatch, "matrix product shapes");
  Matrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Elem xik = x(i, k);
      if (xik == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) = f.add(r(i, j), f.mul(xik, y(k, j)));
    }
  return r;
}

inline std::vector<Elem> apply(const Field& f, const Matrix& m, std::span<const Elem> v) {
  if (v.size() != m.cols) throw error(errc::dimension_mismatch, "matrix-vector shapes");
  std::vector<Elem> r(m.rows, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Elem acc = 0;
    for (std::size_t j = 0; j < m.cols; ++j) acc = f.add(acc, f.mul(m(i, j), v[j]));
    r[i] = acc;
  }
  return r;
}

struct Rref {
  Matrix m;  // zero rows removed
  std::vector<std::size_t> pivots;
};

inline Rref rref(const Field& f, Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
    const Elem inv = f.inv(m(r, c));
    for (std::size_t j = 0; j < m.cols; ++j) m(r, j) = f.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Elem factor = m(i, c);
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix out(r, m.cols);
  std::copy(m.a.begin(), m.a.begin() + static_cast<std::ptrdiff_t>(r * m.cols), out.a.begin());
  return {std::move(out), std::move(pivots)};
}

inline std::size_t rank(const Field& f, const Matrix& m) { return rref(f, m).pivots.size(); }

inline Elem determinant(const Field& f, Matrix m) {
  if (m.rows != m.cols) throw error(errc::dimension_mismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows;
  Elem det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = f.neg(det);
    }
    det = f.mul(det, m(c, c));
    const Elem inv = f.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Elem factor = f.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(c, j)));
    }
  }
  return det;
}

inline Matrix inverse(const Field& f, const Matrix& m) {
  if (m.rows != m.cols) throw error(errc::dimension_mismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows;
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto red = rref(f, aug);
  if (red.pivots.size() < n || red.pivots[n - 1] != n - 1)
    throw error(errc::singular_matrix, "matrix is not invertible");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red.m(i, n + j);
  return inv;
}

/// Unique solution of A x = b for square invertible A, nullopt otherwise.
inline std::optional<std::vector<Elem>> solve(const Field& f, const Matrix& m, std::span<const Elem> b) {
  const std::size_t n = m.rows;
  if (m.cols != n || b.size() != n) throw error(errc::dimension_mismatch, "solve shapes");
  Matrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = b[i];
  }
  auto red = rref(f, aug);
  if (red.pivots.size() != n || red.pivots[n - 1] != n - 1) return std::nullopt;
  std::vector<Elem> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = red.m(i, n);
  return x;
}

/// Rows form a basis of { x : m x = 0 }.
inline Matrix nullspace(const Field& f, const Matrix& m) {
  const auto red = rref(f, m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : red.pivots) is_pivot[c] = true;
  Matrix basis(m.cols - red.pivots.size(), m.cols);
  std::size_t r = 0;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    basis(r, free) = 1;
    for (std::size_t i = 0; i < red.pivots.size(); ++i) basis(r, red.pivots[i]) = f.neg(red.m(i, free));
    ++r;
  }
  return basis;
}

inline Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (auto& x : m.a) x = static_cast<Elem>(uniform_below(rng, f.order()));
  return m;
}

inline Matrix random_invertible(const Field& f, std::size_t n, Rng& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, n, rng);
    if (determinant(f, m) != 0) return m;
  }
}

}  // namespace hkb

#endif  // HKB_LINALG_HPP
