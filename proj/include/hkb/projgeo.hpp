#ifndef HKB_PROJGEO_HPP
#define HKB_PROJGEO_HPP

// Points, subspaces and hyperplanes of P^N(F_q), and the point-counting kernel.
//
// A point is stored by its canonical representative: the leftmost nonzero
// coordinate is 1. Points are ranked by the position of that leading one,
// then lexicographically in code order, which gives
//   (1:0:0) (1:0:1) ... (1:q-1:q-1) (0:1:0) ... (0:0:1).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hkb/error.hpp"
#include "hkb/gf.hpp"
#include "hkb/linalg.hpp"
#include "hkb/parallel.hpp"
#include "hkb/poly.hpp"

namespace hkb {

using Coords = std::vector<Elem>;

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// |P^N(F_q)| = q^N + ... + q + 1
inline std::uint64_t proj_point_count(std::uint64_t q, unsigned n) {
  std::uint64_t r = 0;
  for (unsigned i = 0; i <= n; ++i) r += ipow(q, i);
  return r;
}

inline std::size_t leading_index(std::span<const Elem> v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  throw error(errc::invalid_argument, "zero vector is not a projective point");
}

inline Coords canonical(const Field& f, Coords v) {
  const std::size_t k = leading_index(v);
  const Elem inv = f.inv(v[k]);
  for (auto& c : v) c = f.mul(c, inv);
  return v;
}

/// Strict order matching point ranks, for canonical representatives.
inline bool canonical_less(std::span<const Elem> a, std::span<const Elem> b) {
  const auto ka = leading_index(a);
  const auto kb = leading_index(b);
  if (ka != kb) return ka < kb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class ProjectiveSpace {
 public:
  ProjectiveSpace(FieldPtr field, std::size_t n) : field_(std::move(field)), n_(n) {
    const std::uint64_t q = field_->order();
    block_start_.resize(n_ + 2, 0);
    for (std::size_t k = 0; k <= n_; ++k) block_start_[k + 1] = block_start_[k] + ipow(q, static_cast<unsigned>(n_ - k));
  }

  const Field& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  std::size_t dimension() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return block_start_.back(); }

  Coords point(std::uint64_t r) const {
    Coords c(n_ + 1, 0);
    unrank_into(r, c);
    return c;
  }

  std::uint64_t rank(std::span<const Elem> c) const {
    const std::size_t k = leading_index(c);
    std::uint64_t off = 0;
    for (std::size_t i = k + 1; i <= n_; ++i) off = off * field_->order() + c[i];
    return block_start_[k] + off;
  }

  /// fn(coords, rank) for every point with rank in [begin, end), in rank order.
  template <class Fn>
  void for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    if (begin >= end) return;
    Coords c(n_ + 1, 0);
    unrank_into(begin, c);
    std::size_t k = leading_index(c);
    const Elem q = field_->order();
    for (std::uint64_t r = begin; r < end; ++r) {
      fn(std::span<const Elem>(c), r);
      // odometer over the free coordinates k+1..N, then next block
      std::size_t i = n_;
      while (i > k && c[i] == q - 1) c[i--] = 0;
      if (i > k) {
        ++c[i];
      } else if (k < n_) {
        c[k] = 0;
        c[++k] = 1;
      }
    }
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for_each(0, size(), std::forward<Fn>(fn));
  }

  std::vector<Coords> points() const {
    std::vector<Coords> out;
    out.reserve(size());
    for_each([&](std::span<const Elem> c, std::uint64_t) { out.emplace_back(c.begin(), c.end()); });
    return out;
  }

 private:
  void unrank_into(std::uint64_t r, Coords& c) const {
    if (r >= size()) throw error(errc::invalid_argument, "point rank out of range");
    std::size_t k = 0;
    while (block_start_[k + 1] <= r) ++k;
    std::uint64_t off = r - block_start_[k];
    std::fill(c.begin(), c.end(), 0);
    c[k] = 1;
    for (std::size_t i = n_; i > k; --i) {
      c[i] = static_cast<Elem>(off % field_->order());
      off /= field_->order();
    }
  }

  FieldPtr field_;
  std::size_t n_;
  std::vector<std::uint64_t> block_start_;
};

/// All canonical points of P^N in rank order.
inline std::vector<Coords> enum_points(const FieldPtr& f, std::size_t n) { return ProjectiveSpace(f, n).points(); }

// ---------------------------------------------------------------------------
// counting

inline std::uint64_t count_zeros(const MultiPoly& f, unsigned jobs = 1) {
  const ProjectiveSpace space(f.field_ptr(), f.nvars() - 1);
  const CompiledPoly eval(f);
  return parallel_sum(space.size(), jobs, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t n = 0;
    space.for_each(b, e, [&](std::span<const Elem> c, std::uint64_t) { n += eval(c) == 0; });
    return n;
  });
}

/// N_q(X)
inline std::uint64_t count_points(const Hypersurface& x, unsigned jobs = 1) { return count_zeros(x.poly(), jobs); }

inline MultiPoly extend_scalars(const MultiPoly& f, const FieldPtr& big) {
  const Embedding emb(f.field_ptr(), big);
  return f.map_coefficients(big, [&](Elem c) { return emb(c); });
}

/// N_{q^t}(X)
inline std::uint64_t count_points_ext(const Hypersurface& x, unsigned t, unsigned jobs = 1) {
  if (t == 0) throw error(errc::invalid_argument, "extension degree must be >= 1");
  if (t == 1) return count_points(x, jobs);
  return count_zeros(extend_scalars(x.poly(), extension_field(x.field(), t)), jobs);
}

/// Rational points of X, canonical, in rank order.
inline std::vector<Coords> rational_points(const MultiPoly& f) {
  const ProjectiveSpace space(f.field_ptr(), f.nvars() - 1);
  const CompiledPoly eval(f);
  std::vector<Coords> out;
  space.for_each([&](std::span<const Elem> c, std::uint64_t) {
    if (eval(c) == 0) out.emplace_back(c.begin(), c.end());
  });
  return out;
}

/// Membership bitmap indexed by point rank.
inline std::vector<bool> zero_set(const MultiPoly& f) {
  const ProjectiveSpace space(f.field_ptr(), f.nvars() - 1);
  const CompiledPoly eval(f);
  std::vector<bool> z(space.size());
  space.for_each([&](std::span<const Elem> c, std::uint64_t r) { z[r] = eval(c) == 0; });
  return z;
}

// ---------------------------------------------------------------------------
// linear subspaces

class LinearSubspace {
 public:
  /// Span of the rows of `generators` inside P^N.
  LinearSubspace(FieldPtr field, std::size_t n, const Matrix& generators) : field_(std::move(field)), n_(n) {
    if (generators.cols != n + 1) throw error(errc::dimension_mismatch, "subspace generators");
    auto red = rref(*field_, generators);
    basis_ = std::move(red.m);
    pivots_ = std::move(red.pivots);
  }

  static LinearSubspace span(const FieldPtr& field, std::size_t n, const std::vector<Coords>& pts) {
    Matrix m(pts.size(), n + 1);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j <= n; ++j) m(i, j) = pts[i].at(j);
    return LinearSubspace(field, n, m);
  }

  static LinearSubspace empty(const FieldPtr& field, std::size_t n) { return LinearSubspace(field, n, Matrix(0, n + 1)); }

  const FieldPtr& field_ptr() const noexcept { return field_; }
  std::size_t ambient() const noexcept { return n_; }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  int projective_dimension() const noexcept { return static_cast<int>(basis_.rows) - 1; }
  bool is_empty() const noexcept { return basis_.rows == 0; }

  bool contains(std::span<const Elem> v) const {
    Matrix m(basis_.rows + 1, n_ + 1);
    std::copy(basis_.a.begin(), basis_.a.end(), m.a.begin());
    for (std::size_t j = 0; j <= n_; ++j) m(basis_.rows, j) = v[j];
    return rank(*field_, m) == basis_.rows;
  }

  /// Canonical points, rank order.
  std::vector<Coords> points() const {
    std::vector<Coords> out;
    if (basis_.rows == 0) return out;
    const Field& f = *field_;
    // leading coefficient 1 on the first nonzero row combination keeps the
    // result canonical because the basis is in reduced row-echelon form
    ProjectiveSpace coeffs(field_, basis_.rows - 1);
    coeffs.for_each([&](std::span<const Elem> c, std::uint64_t) {
      Coords v(n_ + 1, 0);
      for (std::size_t i = 0; i < basis_.rows; ++i)
        if (c[i])
          for (std::size_t j = 0; j <= n_; ++j) v[j] = f.add(v[j], f.mul(c[i], basis_(i, j)));
      out.push_back(std::move(v));
    });
    std::sort(out.begin(), out.end(), [](const Coords& a, const Coords& b) { return canonical_less(a, b); });
    return out;
  }

  bool operator==(const LinearSubspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }

 private:
  FieldPtr field_;
  std::size_t n_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Hyperplanes (canonical linear forms) containing S, in rank order.
inline std::vector<LinearForm> hyperplanes_through(const LinearSubspace& s) {
  if (s.projective_dimension() >= static_cast<int>(s.ambient()))
    throw error(errc::invalid_argument, "subspace is the whole space");
  const Matrix dual = nullspace(*s.field_ptr(), s.basis());
  return LinearSubspace(s.field_ptr(), s.ambient(), dual).points();
}

/// Points of the hyperplane {h = 0}.
inline LinearSubspace hyperplane_subspace(const FieldPtr& f, std::span<const Elem> h) {
  Matrix m(1, h.size());
  std::copy(h.begin(), h.end(), m.a.begin());
  return LinearSubspace(f, h.size() - 1, nullspace(*f, m));
}

inline std::uint64_t count_on_subspace(const MultiPoly& f, const LinearSubspace& s) {
  std::uint64_t n = 0;
  for (const auto& p : s.points()) n += f.evaluate(p) == 0;
  return n;
}

// ---------------------------------------------------------------------------
// sections and lines

struct Section {
  std::optional<Hypersurface> curve;  // empty when the hyperplane is a component
  Matrix embedding;                   // (N+1) x N, section coordinates -> ambient

  bool fully_contained() const noexcept { return !curve.has_value(); }
};

/// X ∩ {h = 0} in coordinates of the hyperplane. The variable of the last
/// nonzero coefficient of h is eliminated; the remaining N coordinates keep
/// their order.
inline Section section(const Hypersurface& x, std::span<const Elem> h) {
  const Field& f = x.field();
  const std::size_t n = x.ambient();
  if (h.size() != n + 1) throw error(errc::dimension_mismatch, "hyperplane length");
  std::size_t k = n + 1;
  for (std::size_t i = n + 1; i-- > 0;)
    if (h[i] != 0) {
      k = i;
      break;
    }
  if (k == n + 1) throw error(errc::invalid_argument, "zero hyperplane");
  const Elem inv = f.inv(h[k]);
  Matrix m(n + 1, n);
  for (std::size_t i = 0, col = 0; i <= n; ++i) {
    if (i == k) continue;
    m(i, col) = 1;
    m(k, col) = f.neg(f.mul(inv, h[i]));
    ++col;
  }
  MultiPoly g = substitute_linear(x.poly(), m);
  if (g.is_zero()) return {std::nullopt, m};
  return {Hypersurface(std::move(g)), m};
}

/// One canonical second point for each line through p: the lines meet the
/// coordinate hyperplane {X_k = 0}, k the leading index of p, exactly once.
inline std::vector<Coords> lines_through(std::span<const Elem> p, const FieldPtr& f, std::size_t n) {
  if (p.size() != n + 1) throw error(errc::dimension_mismatch, "point length");
  if (n < 1) throw error(errc::unsupported_dimension, "lines need N >= 1");
  const std::size_t k = leading_index(p);
  std::vector<Coords> out;
  ProjectiveSpace(f, n - 1).for_each([&](std::span<const Elem> c, std::uint64_t) {
    Coords q(c.begin(), c.end());
    q.insert(q.begin() + static_cast<std::ptrdiff_t>(k), 0);
    out.push_back(std::move(q));
  });
  return out;
}

}  // namespace hkb

#endif  // HKB_PROJGEO_HPP
