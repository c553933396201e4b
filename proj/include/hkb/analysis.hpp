#ifndef HKB_ANALYSIS_HPP
#define HKB_ANALYSIS_HPP

// Structural analyzers: singular locus, linear components, space filling,
// cone vertices, line coverage and hyperplane-section spectra.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "hkb/gf.hpp"
#include "hkb/linalg.hpp"
#include "hkb/parallel.hpp"
#include "hkb/poly.hpp"
#include "hkb/projgeo.hpp"

namespace hkb {

namespace detail {

using Incidence = std::vector<std::vector<std::uint32_t>>;

inline Incidence build_incidence(const FieldPtr& f, std::size_t n) {
  const ProjectiveSpace space(f, n);
  Incidence inc;
  inc.reserve(space.size());
  space.for_each([&](std::span<const Elem> h, std::uint64_t) {
    std::vector<std::uint32_t> ranks;
    for (const auto& p : hyperplane_subspace(f, h).points()) ranks.push_back(static_cast<std::uint32_t>(space.rank(p)));
    inc.push_back(std::move(ranks));
  });
  return inc;
}

}  // namespace detail

/// For every hyperplane (dual rank order) the ranks of its points. Cached per
/// (q, N) while the table stays below ~30M entries.
inline std::shared_ptr<const detail::Incidence> hyperplane_incidence(const FieldPtr& f, std::size_t n) {
  const std::uint64_t q = f->order();
  const std::uint64_t entries = proj_point_count(q, static_cast<unsigned>(n)) * proj_point_count(q, static_cast<unsigned>(n - 1));
  if (entries > 30'000'000) return std::make_shared<const detail::Incidence>(detail::build_incidence(f, n));
  static std::mutex mu;
  static std::map<std::tuple<unsigned, unsigned, std::size_t>, std::shared_ptr<const detail::Incidence>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{f->characteristic(), f->degree(), n}];
  if (!slot) slot = std::make_shared<const detail::Incidence>(detail::build_incidence(f, n));
  return slot;
}

// ---------------------------------------------------------------------------
// singular locus

struct SingularityReport {
  std::vector<unsigned> tested_extensions;
  std::vector<std::vector<Coords>> points;  // per tested t, codes in F_{q^t}
  bool gradient_identically_zero = false;
  std::optional<MultiPoly> pth_root;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : points) n += v.size();
    return n;
  }
  bool empty() const { return total() == 0; }
  std::size_t rational_count() const { return points.empty() ? 0 : points.front().size(); }
};

/// F_{q^t}-points with F and every partial vanishing, t = 1..t_max. A sweep
/// over finitely many extensions is evidence of smoothness, not a proof.
inline SingularityReport singular_points(const Hypersurface& x, unsigned t_max = 2, unsigned jobs = 1) {
  if (t_max == 0) throw error(errc::invalid_argument, "t_max must be >= 1");
  SingularityReport rep;
  const std::size_t nv = x.poly().nvars();
  std::vector<MultiPoly> partials;
  bool all_zero = true;
  for (std::size_t i = 0; i < nv; ++i) {
    partials.push_back(partial_derivative(x.poly(), i));
    all_zero &= partials.back().is_zero();
  }
  if (all_zero) {
    rep.gradient_identically_zero = true;
    rep.pth_root = pth_power_root(x.poly());
  }
  for (unsigned t = 1; t <= t_max; ++t) {
    const FieldPtr big = t == 1 ? x.field_ptr() : extension_field(x.field(), t);
    const MultiPoly f = t == 1 ? x.poly() : extend_scalars(x.poly(), big);
    const CompiledPoly ef(f);
    std::vector<MultiPoly> dfs;
    std::vector<CompiledPoly> edfs;
    for (const auto& d : partials) dfs.push_back(t == 1 ? d : extend_scalars(d, big));
    for (const auto& d : dfs)
      if (!d.is_zero()) edfs.emplace_back(d);
    const ProjectiveSpace space(big, x.ambient());
    auto chunks = parallel_ranges(space.size(), jobs, [&](std::uint64_t b, std::uint64_t e) {
      std::vector<Coords> found;
      space.for_each(b, e, [&](std::span<const Elem> c, std::uint64_t) {
        if (ef(c) != 0) return;
        for (const auto& d : edfs)
          if (d(c) != 0) return;
        found.emplace_back(c.begin(), c.end());
      });
      return found;
    });
    std::vector<Coords> pts;
    for (auto& ch : chunks) pts.insert(pts.end(), ch.begin(), ch.end());
    // independent recheck through the plain evaluator
    for (const auto& p : pts) {
      if (f.evaluate(p) != 0) throw std::logic_error("singular point recheck failed: F(P) != 0");
      for (const auto& d : dfs)
        if (d.evaluate(p) != 0) throw std::logic_error("singular point recheck failed: gradient");
    }
    rep.tested_extensions.push_back(t);
    rep.points.push_back(std::move(pts));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// linear components

/// Every F_q-linear form dividing F, one per dual point in rank order.
inline std::vector<LinearForm> linear_components(const MultiPoly& f) {
  const std::size_t n = f.nvars() - 1;
  const FieldPtr& fp = f.field_ptr();
  std::vector<LinearForm> out;
  if (f.is_zero()) throw error(errc::zero_form, "zero polynomial has no components");
  if (n == 0) return out;
  const auto zeros = zero_set(f);
  const std::uint64_t hyper = proj_point_count(fp->order(), static_cast<unsigned>(n - 1));
  std::uint64_t nz = 0;
  for (bool b : zeros) nz += b;
  if (nz < hyper) return out;
  const auto inc = hyperplane_incidence(fp, n);
  const ProjectiveSpace dual(fp, n);
  for (std::uint64_t r = 0; r < inc->size(); ++r) {
    bool all = true;
    for (auto pr : (*inc)[r])
      if (!zeros[pr]) {
        all = false;
        break;
      }
    if (!all) continue;
    auto h = dual.point(r);
    if (divides_linear(f, h)) out.push_back(std::move(h));
  }
  return out;
}

inline std::vector<LinearForm> linear_components(const Hypersurface& x) { return linear_components(x.poly()); }

inline bool is_space_filling(const Hypersurface& x, unsigned jobs = 1) {
  return count_points(x, jobs) == proj_point_count(x.field().order(), static_cast<unsigned>(x.ambient()));
}

// ---------------------------------------------------------------------------
// cones

struct ConeReport {
  LinearSubspace vertex;
  std::vector<std::size_t> base_coordinates;  // complement of the vertex pivots
  MultiPoly base_form;                        // F restricted to those coordinates

  int vertex_dimension() const { return vertex.projective_dimension(); }
  std::size_t base_ambient() const { return base_coordinates.size() - 1; }
  std::optional<Hypersurface> base() const {
    if (base_form.nvars() < 2 || base_form.total_degree() == 0) return std::nullopt;
    return Hypersurface(base_form);
  }
};

namespace detail {

// F∘T with T the identity whose column k (leading index of v) is replaced by v.
inline bool is_vertex_point(const MultiPoly& f, std::span<const Elem> v) {
  const std::size_t k = leading_index(v);
  Matrix t = Matrix::identity(f.nvars());
  for (std::size_t i = 0; i < f.nvars(); ++i) t(i, k) = v[i];
  return !substitute_linear(f, t).uses_variable(k);
}

}  // namespace detail

inline ConeReport cone_analysis(const Hypersurface& x) {
  const MultiPoly& f = x.poly();
  const FieldPtr& fp = x.field_ptr();
  const std::size_t n = x.ambient();
  std::vector<Coords> vpts;
  // a vertex point is a zero of F, so only rational points are candidates
  for (const auto& p : rational_points(f))
    if (detail::is_vertex_point(f, p)) vpts.push_back(p);
  LinearSubspace vertex = vpts.empty() ? LinearSubspace::empty(fp, n) : LinearSubspace::span(fp, n, vpts);
  for (const auto& p : vertex.points())
    if (!detail::is_vertex_point(f, p)) throw std::logic_error("vertex span contains a non-vertex point");

  std::vector<bool> pivot(n + 1, false);
  for (auto c : vertex.pivots()) pivot[c] = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i <= n; ++i)
    if (!pivot[i]) keep.push_back(i);
  std::vector<Term> ts;
  for (const auto& t : f.terms()) {
    bool hits = false;
    for (std::size_t i = 0; i <= n; ++i) hits |= pivot[i] && t.exps[i] != 0;
    if (hits) continue;
    Exponents e;
    for (auto i : keep) e.push_back(t.exps[i]);
    ts.push_back({std::move(e), t.coeff});
  }
  MultiPoly base = MultiPoly::from_terms(fp, keep.size(), std::move(ts));
  return {std::move(vertex), std::move(keep), std::move(base)};
}

// ---------------------------------------------------------------------------
// lines on surfaces

struct LineCoverage {
  bool covered = true;
  std::vector<std::pair<Coords, std::optional<Coords>>> witnesses;  // point, second point of a contained line
  std::optional<Coords> first_uncovered;
};

inline LineCoverage covered_by_lines(const Hypersurface& x) {
  if (x.ambient() != 3) throw error(errc::ambient_not_supported, "line coverage is implemented for surfaces in P^3");
  LineCoverage out;
  for (const auto& p : rational_points(x.poly())) {
    std::optional<Coords> w;
    for (const auto& r : lines_through(p, x.field_ptr(), 3))
      if (restrict_to_line(x.poly(), p, r).is_zero()) {
        w = r;
        break;
      }
    if (!w) {
      out.covered = false;
      if (!out.first_uncovered) out.first_uncovered = p;
    }
    out.witnesses.emplace_back(p, std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// hyperplane sections

/// Per-hyperplane section counts in dual rank order. A hyperplane inside X
/// contributes |P^{N-1}(F_q)|.
inline std::vector<std::uint64_t> section_counts(const Hypersurface& x) {
  const auto zeros = zero_set(x.poly());
  const auto inc = hyperplane_incidence(x.field_ptr(), x.ambient());
  std::vector<std::uint64_t> out;
  out.reserve(inc->size());
  for (const auto& h : *inc) {
    std::uint64_t c = 0;
    for (auto r : h) c += zeros[r];
    out.push_back(c);
  }
  return out;
}

/// count -> multiplicity over all hyperplanes of P^N.
inline std::map<std::uint64_t, std::uint64_t> section_spectrum(const Hypersurface& x) {
  std::map<std::uint64_t, std::uint64_t> spec;
  for (auto c : section_counts(x)) ++spec[c];
  return spec;
}

}  // namespace hkb

#endif  // HKB_ANALYSIS_HPP
