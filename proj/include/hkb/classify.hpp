#ifndef HKB_CLASSIFY_HPP
#define HKB_CLASSIFY_HPP

// Bound report and extremal-case classification. A hypersurface meeting Θ is
// matched against the three known families, each with an explicit witness;
// one that matches none is reported as Unclassified.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkb/analysis.hpp"
#include "hkb/bounds.hpp"
#include "hkb/constructions.hpp"
#include "hkb/equivalence.hpp"
#include "hkb/linalg.hpp"
#include "hkb/poly.hpp"
#include "hkb/projgeo.hpp"

namespace hkb {

struct BoundReport {
  unsigned n = 0;  // dimension, ambient N = n + 1
  unsigned d = 0;
  std::uint64_t q = 0;
  BigInt measured;
  std::optional<BigInt> theta;  // n >= 2
  BigInt serre;
  std::optional<BigInt> sziklai;       // curves
  std::optional<BigInt> aubry_perret;  // curves
  BigInt proj_space;
  bool has_linear_components = false;
  bool achieves_theta = false;
  bool achieves_serre = false;
  bool exceeds_any = false;
};

inline BoundReport bound_report(const Hypersurface& x, std::uint64_t measured, bool has_components) {
  if (x.ambient() < 2) throw error(errc::unsupported_dimension, "bound report needs ambient dimension >= 2");
  BoundReport r;
  r.n = static_cast<unsigned>(x.ambient() - 1);
  r.d = x.degree();
  r.q = x.field().order();
  r.measured = measured;
  r.serre = serre_bound(r.n, r.d, r.q);
  r.proj_space = proj_space_count(static_cast<unsigned>(x.ambient()), r.q);
  r.has_linear_components = has_components;
  if (r.n >= 2) r.theta = theta(r.n, r.d, r.q);
  if (r.n == 1 && r.d >= 2) {
    r.sziklai = sziklai_bound(r.d, r.q);
    r.aubry_perret = aubry_perret_bound(r.d, r.q);
  }
  r.achieves_theta = r.theta && r.measured == *r.theta;
  r.achieves_serre = r.measured == r.serre;
  r.exceeds_any = r.measured > r.serre;
  if (!has_components) {
    if (r.theta && r.measured > *r.theta) r.exceeds_any = true;
    if (r.sziklai && r.measured > *r.sziklai) r.exceeds_any = true;
  }
  return r;
}

enum class TheoremCase { none, space_filling, hermitian_cone, quadric_pencil, sziklai_gamma };

inline const char* case_name(TheoremCase c) {
  switch (c) {
    case TheoremCase::none: return "none";
    case TheoremCase::space_filling: return "space-filling";
    case TheoremCase::hermitian_cone: return "hermitian-cone";
    case TheoremCase::quadric_pencil: return "quadric-pencil";
    case TheoremCase::sziklai_gamma: return "sziklai-gamma";
  }
  return "?";
}

enum class ClassStatus {
  excluded,      // has F_q-linear components
  below_bound,   // strictly below the relevant bound
  extremal,      // meets the bound and matches a known case
  unclassified,  // meets or exceeds the bound without a match: alarm
  inconclusive,  // meets the bound, equivalence search ran out of budget
};

inline const char* status_name(ClassStatus s) {
  switch (s) {
    case ClassStatus::excluded: return "Excluded";
    case ClassStatus::below_bound: return "BelowBound";
    case ClassStatus::extremal: return "Extremal";
    case ClassStatus::unclassified: return "Unclassified";
    case ClassStatus::inconclusive: return "Inconclusive";
  }
  return "?";
}

struct PencilForm {
  Matrix change;  // F∘change = X0 (a.X) + X1 (b.X)
  std::vector<Elem> a, b;
  Elem det = 0;   // bordered determinant
};

struct Classification {
  BoundReport bounds;
  ClassStatus status = ClassStatus::below_bound;
  TheoremCase theorem_case = TheoremCase::none;
  std::vector<std::string> evidence;
  std::vector<LinearForm> linear_components;
  std::optional<ConeReport> cone;
  std::optional<EquivalenceVerdict> equivalence;
  std::optional<Matrix> antisymmetric;  // case space-filling
  std::optional<PencilForm> pencil;     // case quadric-pencil

  bool alarm() const { return status == ClassStatus::unclassified || bounds.exceeds_any; }
};

namespace detail {

/// A with F = sum a_ij X_i X_j^q and A^t = -A, if F has that shape.
inline std::optional<Matrix> antisymmetric_matrix(const MultiPoly& f) {
  const Field& fd = f.field();
  const unsigned q = fd.order();
  const std::size_t nv = f.nvars();
  Matrix a(nv, nv);
  for (const auto& t : f.terms()) {
    std::size_t i = nv, j = nv;
    for (std::size_t k = 0; k < nv; ++k) {
      if (t.exps[k] == 0) continue;
      if (t.exps[k] == 1 && i == nv)
        i = k;
      else if (t.exps[k] == q && j == nv)
        j = k;
      else if (t.exps[k] == q + 1 && i == nv && j == nv)
        i = j = k;
      else
        return std::nullopt;
    }
    if (i == nv || j == nv) return std::nullopt;
    a(i, j) = t.coeff;
  }
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      if (a(j, i) != fd.neg(a(i, j))) return std::nullopt;
  return a;
}

/// Some (m-2)-flat of P^m on which the form vanishes identically, as points.
inline std::optional<std::vector<Coords>> codim2_flat(const MultiPoly& g) {
  const std::size_t m = g.nvars() - 1;
  if (m == 1) return std::vector<Coords>{};
  if (m == 2) {
    auto pts = rational_points(g);
    if (pts.empty()) return std::nullopt;
    return std::vector<Coords>{pts.front()};
  }
  if (m == 3) {
    for (const auto& p : rational_points(g))
      for (const auto& r : lines_through(p, g.field_ptr(), 3))
        if (restrict_to_line(g, p, r).is_zero()) return std::vector<Coords>{p, r};
  }
  return std::nullopt;
}

inline std::optional<PencilForm> pencil_form(const Hypersurface& x, const ConeReport& cone) {
  const Field& f = x.field();
  const std::size_t n = x.ambient();
  if (cone.base_ambient() > 3 || cone.base_coordinates.size() < 2) return std::nullopt;
  const auto flat = codim2_flat(cone.base_form);
  if (!flat) return std::nullopt;
  std::vector<Coords> gens;
  for (std::size_t i = 0; i < cone.vertex.basis().rows; ++i) {
    Coords v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = cone.vertex.basis()(i, j);
    gens.push_back(std::move(v));
  }
  for (const auto& p : *flat) {
    Coords v(n + 1, 0);
    for (std::size_t k = 0; k < p.size(); ++k) v[cone.base_coordinates[k]] = p[k];
    gens.push_back(std::move(v));
  }
  const auto span = LinearSubspace::span(x.field_ptr(), n, gens);
  if (span.projective_dimension() != static_cast<int>(n) - 2) return std::nullopt;
  const auto hs = hyperplanes_through(span);
  Matrix t(n + 1, n + 1);
  std::size_t row = 0;
  for (std::size_t k = 0; k < 2; ++k, ++row)
    for (std::size_t j = 0; j <= n; ++j) t(row, j) = hs[k][j];
  for (std::size_t e = 0; e <= n && row <= n; ++e) {
    Matrix trial = t;
    trial(row, e) = 1;
    Matrix head(row + 1, n + 1);
    std::copy(trial.a.begin(), trial.a.begin() + static_cast<std::ptrdiff_t>((row + 1) * (n + 1)), head.a.begin());
    if (rank(f, head) == row + 1) {
      t = std::move(trial);
      ++row;
    }
  }
  const Matrix change = inverse(f, t);
  const MultiPoly g = substitute_linear(x.poly(), change);
  std::vector<Elem> a(n + 1, 0), b(n + 1, 0);
  // the other variable of a quadratic monomial once one factor is removed
  auto rest = [](Exponents e, std::size_t k) {
    --e[k];
    return static_cast<std::size_t>(std::find_if(e.begin(), e.end(), [](unsigned v) { return v != 0; }) - e.begin());
  };
  for (const auto& term : g.terms()) {
    if (term.exps[0] > 0)
      a[rest(term.exps, 0)] = term.coeff;
    else if (term.exps[1] > 0)
      b[rest(term.exps, 1)] = term.coeff;
    else
      return std::nullopt;
  }
  auto qp = quadric_pencil(a, b, x.field_ptr());
  if (!(qp.surface.poly() == g)) throw std::logic_error("pencil normal form failed verification");
  return PencilForm{change, std::move(a), std::move(b), qp.det};
}

}  // namespace detail

/// Bound comparison plus, at equality, the matching extremal family.
inline Classification classify(const Hypersurface& x, const SearchOptions& opt = {}) {
  Classification c;
  c.linear_components = linear_components(x);
  const std::uint64_t measured = count_points(x, opt.jobs);
  c.bounds = bound_report(x, measured, !c.linear_components.empty());
  const BoundReport& b = c.bounds;
  const FieldPtr& fp = x.field_ptr();
  const std::uint64_t q = b.q;

  if (!c.linear_components.empty()) {
    c.status = ClassStatus::excluded;
    c.evidence.push_back(std::to_string(c.linear_components.size()) + " F_q-linear component(s)");
    if (b.exceeds_any) c.evidence.push_back("count exceeds the serre bound");
    return c;
  }
  if (b.exceeds_any) {
    c.status = ClassStatus::unclassified;
    c.evidence.push_back("count exceeds the bound");
    return c;
  }

  if (b.n == 1) {
    if (!b.sziklai || b.measured < *b.sziklai) {
      c.status = ClassStatus::below_bound;
      return c;
    }
    c.evidence.push_back("count meets (d-1)q+2");
    if (!sziklai_equality_possible(b.d, q)) {
      c.status = ClassStatus::unclassified;
      c.evidence.push_back("equality outside d = q = 4");
      return c;
    }
    c.equivalence = pgl_search(x, gamma_curve(fp), opt);
  } else if (!b.achieves_theta) {
    c.status = ClassStatus::below_bound;
    return c;
  } else if (b.d == q + 1) {
    c.evidence.push_back("d = q+1");
    const bool filling = measured == proj_point_count(q, static_cast<unsigned>(x.ambient()));
    c.evidence.push_back(filling ? "every point of P^N is on X" : "X misses points of P^N");
    if (filling) c.antisymmetric = detail::antisymmetric_matrix(x.poly());
    c.evidence.push_back(c.antisymmetric ? "form is x A x^[q] with A^t = -A" : "no antisymmetric A with F = x A x^[q]");
    c.status = c.antisymmetric ? ClassStatus::extremal : ClassStatus::unclassified;
    if (c.antisymmetric) c.theorem_case = TheoremCase::space_filling;
    return c;
  } else if (fp->is_square_order() && b.d == fp->sqrt_order() + 1) {
    c.evidence.push_back("d = sqrt(q)+1");
    c.cone = cone_analysis(x);
    c.evidence.push_back("vertex dimension " + std::to_string(c.cone->vertex_dimension()));
    auto base = c.cone->base();
    if (c.cone->base_ambient() != 3 || !base) {
      c.status = ClassStatus::unclassified;
      c.evidence.push_back("cone base is not a surface in P^3");
      return c;
    }
    c.equivalence = pgl_search(*base, hermitian(fp, 3), opt);
  } else if (b.d == 2) {
    c.evidence.push_back("d = 2");
    c.cone = cone_analysis(x);
    c.pencil = detail::pencil_form(x, *c.cone);
    if (!c.pencil) {
      c.status = ClassStatus::unclassified;
      c.evidence.push_back("no codimension-2 linear subspace on X");
      return c;
    }
    c.evidence.push_back("X contains a codimension-2 linear subspace");
    c.evidence.push_back(std::string("bordered determinant ") + (c.pencil->det ? "nonzero" : "zero"));
    c.status = ClassStatus::extremal;
    c.theorem_case = TheoremCase::quadric_pencil;
    return c;
  } else {
    c.status = ClassStatus::unclassified;
    c.evidence.push_back("degree matches no extremal family");
    return c;
  }

  // equivalence-backed cases
  const auto& eq = *c.equivalence;
  c.evidence.push_back(std::string("equivalence ") + verdict_name(eq.status) + " (" + eq.reason + ")");
  switch (eq.status) {
    case Verdict::equivalent:
      c.status = ClassStatus::extremal;
      c.theorem_case = b.n == 1 ? TheoremCase::sziklai_gamma : TheoremCase::hermitian_cone;
      break;
    case Verdict::inequivalent: c.status = ClassStatus::unclassified; break;
    case Verdict::inconclusive: c.status = ClassStatus::inconclusive; break;
  }
  return c;
}

}  // namespace hkb

#endif  // HKB_CLASSIFY_HPP
