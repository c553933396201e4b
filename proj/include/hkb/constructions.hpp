#ifndef HKB_CONSTRUCTIONS_HPP
#define HKB_CONSTRUCTIONS_HPP

// Constructors for the extremal families and named objects.

#include <optional>
#include <string>
#include <vector>

#include "hkb/analysis.hpp"
#include "hkb/gf.hpp"
#include "hkb/linalg.hpp"
#include "hkb/poly.hpp"

namespace hkb {

/// Strict upper triangle of an antisymmetric (n+2)x(n+2) matrix. Diagonal and
/// lower entries cannot be set, so x A x^[q] never picks up X_i^{q+1} terms.
class AntisymmetricSpec {
 public:
  explicit AntisymmetricSpec(std::size_t n) : n_(n), upper_(n + 2, n + 2) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ + 2; }

  void set(std::size_t i, std::size_t j, Elem a) {
    if (i >= j || j >= size()) throw error(errc::invalid_argument, "antisymmetric spec takes strict upper entries only");
    upper_(i, j) = a;
  }
  Elem get(std::size_t i, std::size_t j) const { return i < j ? upper_(i, j) : 0; }
  bool is_zero() const {
    for (auto a : upper_.a)
      if (a) return false;
    return true;
  }

  /// A = upper - upper^t
  Matrix matrix(const Field& f) const {
    Matrix a(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) {
        a(i, j) = upper_(i, j);
        a(j, i) = f.neg(upper_(i, j));
      }
    return a;
  }

  static AntisymmetricSpec random(const Field& f, std::size_t n, Rng& rng) {
    AntisymmetricSpec s(n);
    while (s.is_zero())
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) s.set(i, j, static_cast<Elem>(uniform_below(rng, f.order())));
    return s;
  }

 private:
  std::size_t n_;
  Matrix upper_;
};

/// sum_{i<j} a_ij (X_i X_j^q - X_i^q X_j), degree q+1.
inline Hypersurface space_filling(const AntisymmetricSpec& spec, const FieldPtr& f) {
  if (spec.is_zero()) throw error(errc::zero_form, "antisymmetric spec is zero");
  const std::size_t nv = spec.size();
  const unsigned q = f->order();
  std::vector<Term> ts;
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j) {
      const Elem a = spec.get(i, j);
      if (!f->contains(a)) throw error(errc::invalid_argument, "coefficient code outside the field");
      if (!a) continue;
      Exponents e1(nv, 0), e2(nv, 0);
      e1[i] = 1;
      e1[j] = q;
      e2[i] = q;
      e2[j] = 1;
      ts.push_back({e1, a});
      ts.push_back({e2, f->neg(a)});
    }
  return Hypersurface(MultiPoly::from_terms(f, nv, std::move(ts)));
}

/// Square matrix over F_q with a_ji = a_ij^{sqrt q}.
struct HermitianSpec {
  Matrix a;

  static HermitianSpec identity(std::size_t m) { return {Matrix::identity(m)}; }
  bool is_hermitian(const Field& f) const {
    const unsigned half = f.degree() / 2;
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < a.cols; ++j)
        if (a(j, i) != f.frobenius(a(i, j), half)) return false;
    return true;
  }
};

/// sum_{i,j} a_ij X_i X_j^{sqrt q}
inline Hypersurface hermitian(const HermitianSpec& spec, const FieldPtr& f) {
  const unsigned r = f->sqrt_order();
  if (spec.a.rows != spec.a.cols || spec.a.rows < 3) throw error(errc::dimension_mismatch, "hermitian spec must be square of size >= 3");
  for (auto c : spec.a.a)
    if (!f->contains(c)) throw error(errc::invalid_argument, "coefficient code outside the field");
  if (!spec.is_hermitian(*f)) throw error(errc::non_hermitian_matrix, "a_ji != a_ij^sqrt(q)");
  const std::size_t nv = spec.a.rows;
  std::vector<Term> ts;
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < nv; ++j) {
      if (!spec.a(i, j)) continue;
      Exponents e(nv, 0);
      e[i] += 1;
      e[j] += r;
      ts.push_back({std::move(e), spec.a(i, j)});
    }
  auto g = MultiPoly::from_terms(f, nv, std::move(ts));
  if (g.is_zero()) throw error(errc::zero_form, "hermitian matrix is zero");
  return Hypersurface(std::move(g));
}

inline Hypersurface hermitian(const FieldPtr& f, std::size_t n_ambient = 3) {
  return hermitian(HermitianSpec::identity(n_ambient + 1), f);
}

/// Identity Hermitian form in X0..X3 viewed in P^{n+1}; vertex X0 = .. = X3 = 0.
inline Hypersurface hermitian_cone(const FieldPtr& f, std::size_t n) {
  const unsigned r = f->sqrt_order();
  if (n < 3) throw error(errc::unsupported_dimension, "hermitian cone needs n >= 3");
  std::vector<Term> ts;
  for (std::size_t i = 0; i < 4; ++i) {
    Exponents e(n + 2, 0);
    e[i] = r + 1;
    ts.push_back({std::move(e), 1});
  }
  return Hypersurface(MultiPoly::from_terms(f, n + 2, std::move(ts)));
}

struct QuadricPencil {
  Hypersurface surface;
  Matrix bordered;  // the (n+2)x(n+2) matrix whose determinant decides singularity
  Elem det = 0;
  std::vector<LinearForm> components;

  bool singular_by_det() const { return det == 0; }
  bool reducible() const { return !components.empty(); }
};

/// X0 (a.X) + X1 (b.X)
inline QuadricPencil quadric_pencil(const std::vector<Elem>& a, const std::vector<Elem>& b, const FieldPtr& f) {
  const std::size_t m = a.size();
  if (b.size() != m) throw error(errc::dimension_mismatch, "a and b differ in length");
  if (m < 4) throw error(errc::unsupported_dimension, "quadric pencil needs n >= 2, i.e. length >= 4");
  for (auto c : a)
    if (!f->contains(c)) throw error(errc::invalid_argument, "coefficient code outside the field");
  for (auto c : b)
    if (!f->contains(c)) throw error(errc::invalid_argument, "coefficient code outside the field");
  auto g = MultiPoly::variable(f, m, 0) * MultiPoly::linear(f, a) + MultiPoly::variable(f, m, 1) * MultiPoly::linear(f, b);
  if (g.is_zero()) throw error(errc::zero_form, "quadric pencil form vanishes");
  Matrix bm(m, m);
  bm(0, 0) = f->add(a[0], a[0]);
  bm(1, 1) = f->add(b[1], b[1]);
  bm(0, 1) = bm(1, 0) = f->add(a[1], b[0]);
  for (std::size_t j = 2; j < m; ++j) {
    bm(0, j) = bm(j, 0) = a[j];
    bm(1, j) = bm(j, 1) = b[j];
  }
  const Elem det = determinant(*f, bm);
  Hypersurface x(std::move(g));
  auto comps = linear_components(x);
  return {std::move(x), std::move(bm), det, std::move(comps)};
}

/// Product of d linear forms from one pencil.
inline Hypersurface hyperplane_pencil_union(const std::vector<LinearForm>& forms, const FieldPtr& f) {
  if (forms.size() < 2) throw error(errc::invalid_argument, "pencil union needs at least two forms");
  const std::size_t nv = forms.front().size();
  if (nv < 3) throw error(errc::unsupported_dimension, "pencil union needs ambient >= 2");
  Matrix m(forms.size(), nv);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].size() != nv) throw error(errc::dimension_mismatch, "linear forms differ in length");
    bool zero = true;
    for (std::size_t j = 0; j < nv; ++j) {
      if (!f->contains(forms[i][j])) throw error(errc::invalid_argument, "coefficient code outside the field");
      m(i, j) = forms[i][j];
      zero &= forms[i][j] == 0;
    }
    if (zero) throw error(errc::zero_form, "zero linear form");
  }
  if (rank(*f, m) > 2) throw error(errc::not_a_pencil, "forms span more than a pencil");
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = i + 1; j < forms.size(); ++j)
      if (proportional(*f, forms[i], forms[j])) throw error(errc::repeated_form, "two forms define the same hyperplane");
  MultiPoly g = MultiPoly::linear(f, forms.front());
  for (std::size_t i = 1; i < forms.size(); ++i) g = g * MultiPoly::linear(f, forms[i]);
  return Hypersurface(std::move(g));
}

inline constexpr const char* kGammaText =
    "x0^4+x1^4+x2^4+x0^2*x1^2+x1^2*x2^2+x0^2*x2^2+x0^2*x1*x2+x0*x1^2*x2+x0*x1*x2^2";

/// The plane quartic over F4 meeting the Sziklai bound.
inline Hypersurface gamma_curve(const FieldPtr& f) {
  if (f->characteristic() != 2 || f->degree() != 2) throw error(errc::wrong_field, "gamma curve is defined over F4 only, got " + f->name());
  return parse_hypersurface(kGammaText, f);
}

/// X0 X3 - X1 X2 style hyperbolic quadric, written X0X1 - X2X3.
inline Hypersurface hyperbolic_quadric(const FieldPtr& f) {
  const Elem m1 = f->neg(1);
  return Hypersurface(MultiPoly::from_terms(f, 4, {{{1, 1, 0, 0}, 1}, {{0, 0, 1, 1}, m1}}));
}

struct CorollarySurfaces {
  Hypersurface space_filling;
  std::optional<Hypersurface> hermitian;
  Hypersurface hyperbolic;
  std::string notice;
};

inline CorollarySurfaces corollary_surfaces(const FieldPtr& f) {
  AntisymmetricSpec spec(2);
  spec.set(0, 1, 1);
  spec.set(2, 3, 1);
  CorollarySurfaces out{space_filling(spec, f), std::nullopt, hyperbolic_quadric(f), ""};
  if (f->is_square_order())
    out.hermitian = hermitian(f, 3);
  else
    out.notice = "NotASquare: no Hermitian surface over " + f->name();
  return out;
}

}  // namespace hkb

#endif  // HKB_CONSTRUCTIONS_HPP
