#ifndef HKB_EQUIVALENCE_HPP
#define HKB_EQUIVALENCE_HPP

// Projective equivalence over F_q: invariant fingerprints, then an orbit
// search for M with F∘M proportional to G.
//
// The exhaustive phase works on frames. When Y(F_q) contains N+2 points in
// general position, any witness M sends that frame onto N+2 points of X(F_q)
// in general position, and such a tuple determines M up to scalar. Tuples are
// built depth-first and pruned by the number of X-points on the line through
// each pair. Without a frame the search falls back to a column-by-column scan
// of PGL(N+1, q) with the first Y-point pinned to X(F_q).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hkb/analysis.hpp"
#include "hkb/linalg.hpp"
#include "hkb/parallel.hpp"
#include "hkb/poly.hpp"
#include "hkb/projgeo.hpp"
#include "hkb/random.hpp"

namespace hkb {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct Fingerprint {
  unsigned degree = 0;
  std::size_t ambient = 0;
  std::uint64_t count_q = 0;
  std::optional<std::uint64_t> count_q2;  // skipped when F_{q^2} is out of reach
  std::uint64_t singular_count = 0;
  std::map<std::uint64_t, std::uint64_t> spectrum;
  std::size_t linear_components = 0;
};

inline constexpr std::uint64_t kMaxQ2Points = 4'000'000;

inline Fingerprint fingerprint(const Hypersurface& x, unsigned jobs = 1) {
  Fingerprint fp;
  fp.degree = x.degree();
  fp.ambient = x.ambient();
  fp.count_q = count_points(x, jobs);
  const std::uint64_t q = x.field().order();
  if (q * q <= kDefaultFieldCap && proj_point_count(q * q, static_cast<unsigned>(x.ambient())) <= kMaxQ2Points)
    fp.count_q2 = count_points_ext(x, 2, jobs);
  fp.singular_count = singular_points(x, 1, jobs).rational_count();
  fp.spectrum = section_spectrum(x);
  fp.linear_components = linear_components(x).size();
  return fp;
}

/// Name of the first invariant that separates a and b.
inline std::optional<std::string> separating_invariant(const Fingerprint& a, const Fingerprint& b) {
  if (a.degree != b.degree) return "degree";
  if (a.ambient != b.ambient) return "ambient";
  if (a.count_q != b.count_q) return "count_q";
  if (a.count_q2 && b.count_q2 && *a.count_q2 != *b.count_q2) return "count_q2";
  if (a.singular_count != b.singular_count) return "singular_count";
  if (a.spectrum != b.spectrum) return "section_spectrum";
  if (a.linear_components != b.linear_components) return "linear_components";
  return std::nullopt;
}

enum class Verdict { equivalent, inequivalent, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::equivalent: return "Equivalent";
    case Verdict::inequivalent: return "Inequivalent";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "?";
}

struct EquivalenceVerdict {
  Verdict status = Verdict::inconclusive;
  std::optional<Matrix> witness;  // F∘M = scalar * G
  Elem scalar = 0;
  std::string reason;             // separating invariant or search outcome
  std::string method;
  std::uint64_t candidates = 0;
};

struct SearchOptions {
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  bool use_fingerprint = true;
};

namespace detail {

/// c with a = c*b, if any.
inline std::optional<Elem> proportional_forms(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms().size() != b.terms().size() || a.is_zero()) return std::nullopt;
  const Field& f = a.field();
  const Elem c = f.div(a.terms().front().coeff, b.terms().front().coeff);
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& ta = a.terms()[i];
    const auto& tb = b.terms()[i];
    if (ta.exps != tb.exps || ta.coeff != f.mul(c, tb.coeff)) return std::nullopt;
  }
  return c;
}

class SearchContext {
 public:
  SearchContext(const Hypersurface& x, const Hypersurface& y)
      : x_(x), y_(y), f_(x.field()), space_(x.field_ptr(), x.ambient()), zx_(zero_set(x.poly())),
        zy_(zero_set(y.poly())), px_(rational_points(x.poly())), py_(rational_points(y.poly())) {}

  const Field& field() const { return f_; }
  std::size_t dim() const { return x_.ambient() + 1; }
  const std::vector<Coords>& px() const { return px_; }
  const std::vector<Coords>& py() const { return py_; }

  bool in_x(std::span<const Elem> v) const {
    for (auto c : v)
      if (c) return zx_[space_.rank(canonical(f_, Coords(v.begin(), v.end())))];
    return false;
  }

  /// X-points on the line through two distinct points.
  unsigned line_count(const Coords& a, const Coords& b, const std::vector<bool>& zeros) const {
    unsigned n = zeros[space_.rank(b)] ? 1 : 0;
    Coords v(a.size());
    for (Elem t = 0; t < f_.order(); ++t) {
      for (std::size_t i = 0; i < a.size(); ++i) v[i] = f_.add(a[i], f_.mul(t, b[i]));
      n += zeros[space_.rank(canonical(f_, v))];
    }
    return n;
  }
  unsigned line_count_x(const Coords& a, const Coords& b) const { return line_count(a, b, zx_); }
  unsigned line_count_y(const Coords& a, const Coords& b) const { return line_count(a, b, zy_); }

  /// Complete check of a candidate: point map first, then the forms.
  std::optional<Elem> accepts(const Matrix& m) const {
    for (const auto& y : py_)
      if (!in_x(apply(f_, m, y))) return std::nullopt;
    return proportional_forms(substitute_linear(x_.poly(), m), y_.poly());
  }

 private:
  const Hypersurface& x_;
  const Hypersurface& y_;
  const Field& f_;
  ProjectiveSpace space_;
  std::vector<bool> zx_, zy_;
  std::vector<Coords> px_, py_;
};

struct PartResult {
  std::uint64_t nodes = 0;
  bool exhausted = false;  // hit the node cap
  std::optional<Matrix> witness;
  Elem scalar = 0;
};

inline Matrix columns(const std::vector<Coords>& cols, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
  return m;
}

/// Indices of N+2 points of pts in general position (n = N+1), first in
/// lexicographic order.
inline std::optional<std::vector<std::size_t>> find_frame(const Field& f, const std::vector<Coords>& pts, std::size_t n,
                                                           std::uint64_t node_cap = 2'000'000) {
  std::vector<std::size_t> pick;
  std::uint64_t nodes = 0;
  std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
    if (pick.size() == n) {
      std::vector<Coords> base;
      for (auto i : pick) base.push_back(pts[i]);
      const Matrix a = columns(base, n);
      for (std::size_t i = start; i < pts.size(); ++i) {
        if (++nodes > node_cap) return false;
        auto alpha = solve(f, a, pts[i]);
        if (alpha && std::all_of(alpha->begin(), alpha->end(), [](Elem c) { return c != 0; })) {
          pick.push_back(i);
          return true;
        }
      }
      return false;
    }
    for (std::size_t i = start; i < pts.size(); ++i) {
      if (++nodes > node_cap) return false;
      Matrix m(pick.size() + 1, n);
      for (std::size_t r = 0; r < pick.size(); ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = pts[pick[r]][c];
      for (std::size_t c = 0; c < n; ++c) m(pick.size(), c) = pts[i][c];
      if (rank(f, m) != pick.size() + 1) continue;
      pick.push_back(i);
      if (rec(i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (rec(0)) return pick;
  return std::nullopt;
}

/// Frame search restricted to x0 = px[first].
class FrameSearch {
 public:
  FrameSearch(const SearchContext& ctx, std::vector<Coords> yframe) : ctx_(ctx), yframe_(std::move(yframe)) {
    const Field& f = ctx_.field();
    const std::size_t n = ctx_.dim();
    const Matrix b = columns({yframe_.begin(), yframe_.begin() + static_cast<std::ptrdiff_t>(n)}, n);
    binv_ = inverse(f, b);
    beta_ = apply(f, binv_, yframe_[n]);
    ypair_.assign(n + 1, std::vector<unsigned>(n + 1, 0));
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < i; ++j) ypair_[i][j] = ctx_.line_count_y(yframe_[j], yframe_[i]);
    const auto& px = ctx_.px();
    const std::size_t m = px.size();
    if (m <= kMaxTable) {
      table_.assign(m * m, 0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          table_[i * m + j] = table_[j * m + i] = static_cast<std::uint16_t>(ctx_.line_count_x(px[i], px[j]));
    }
  }

  PartResult run(std::size_t first, std::uint64_t cap) const {
    PartResult res;
    std::vector<std::size_t> pick{first};
    dfs(pick, res, cap);
    return res;
  }

 private:
  bool dfs(std::vector<std::size_t>& pick, PartResult& res, std::uint64_t cap) const {
    const Field& f = ctx_.field();
    const std::size_t n = ctx_.dim();
    const auto& px = ctx_.px();
    const std::size_t depth = pick.size();
    if (depth == n + 1) {
      std::vector<Coords> cols;
      for (std::size_t i = 0; i < n; ++i) cols.push_back(px[pick[i]]);
      const Matrix a = columns(cols, n);
      const auto alpha = solve(f, a, px[pick[n]]);
      Matrix d(n, n);
      for (std::size_t i = 0; i < n; ++i) d(i, i) = f.div((*alpha)[i], beta_[i]);
      Matrix m = multiply(f, multiply(f, a, d), binv_);
      if (auto c = ctx_.accepts(m)) {
        res.witness = std::move(m);
        res.scalar = *c;
        return true;
      }
      return false;
    }
    for (std::size_t i = 0; i < px.size(); ++i) {
      // a node is an extension that survives every pair test
      if (std::find(pick.begin(), pick.end(), i) != pick.end()) continue;
      bool ok = true;
      for (std::size_t j = 0; j < depth && ok; ++j) ok = pair(pick[j], i) == ypair_[depth][j];
      if (!ok) continue;
      if (res.nodes >= cap) {
        res.exhausted = true;
        return false;
      }
      ++res.nodes;
      if (depth < n) {
        Matrix m(depth + 1, n);
        for (std::size_t r = 0; r < depth; ++r)
          for (std::size_t c = 0; c < n; ++c) m(r, c) = px[pick[r]][c];
        for (std::size_t c = 0; c < n; ++c) m(depth, c) = px[i][c];
        if (rank(f, m) != depth + 1) continue;
      } else {
        std::vector<Coords> cols;
        for (std::size_t r = 0; r < n; ++r) cols.push_back(px[pick[r]]);
        const auto alpha = solve(f, columns(cols, n), px[i]);
        if (!alpha || std::any_of(alpha->begin(), alpha->end(), [](Elem c) { return c == 0; })) continue;
      }
      pick.push_back(i);
      if (dfs(pick, res, cap)) return true;
      pick.pop_back();
      if (res.exhausted) return false;
    }
    return false;
  }

  unsigned pair(std::size_t a, std::size_t b) const {
    if (!table_.empty()) return table_[a * ctx_.px().size() + b];
    return ctx_.line_count_x(ctx_.px()[a], ctx_.px()[b]);
  }

  static constexpr std::size_t kMaxTable = 4096;

  const SearchContext& ctx_;
  std::vector<std::uint16_t> table_;  // line counts for pairs of X-points
  std::vector<Coords> yframe_;
  Matrix binv_;
  std::vector<Elem> beta_;
  std::vector<std::vector<unsigned>> ypair_;
};

/// PGL(N+1, q) scan with column 0 pinned. Columns of M' are enumerated in
/// order; Y-points (in S-coordinates) supported on the first j+1 coordinates
/// are checked as soon as column j is fixed.
class PglScan {
 public:
  explicit PglScan(const SearchContext& ctx) : ctx_(ctx) {
    const Field& f = ctx_.field();
    const std::size_t n = ctx_.dim();
    s_ = Matrix::identity(n);
    if (!ctx_.py().empty()) {
      const auto& y0 = ctx_.py().front();
      const std::size_t k = leading_index(y0);
      // column 0 = y0, then e_i for i != k
      std::size_t col = 1;
      s_ = Matrix(n, n);
      for (std::size_t i = 0; i < n; ++i) s_(i, 0) = y0[i];
      for (std::size_t i = 0; i < n; ++i)
        if (i != k) s_(i, col++) = 1;
    }
    sinv_ = inverse(f, s_);
    by_support_.assign(n, {});
    for (const auto& y : ctx_.py()) {
      auto v = apply(f, sinv_, y);
      std::size_t last = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (v[i]) last = i;
      by_support_[last].push_back(std::move(v));
    }
  }

  /// Candidate first columns, one per partition.
  std::vector<Coords> first_columns(const FieldPtr& fp) const {
    if (!ctx_.py().empty()) return ctx_.px();
    return enum_points(fp, ctx_.dim() - 1);
  }

  PartResult run(const Coords& c0, std::uint64_t cap) const {
    PartResult res;
    std::vector<Coords> cols{c0};
    dfs(cols, res, cap);
    return res;
  }

 private:
  bool supported_ok(const std::vector<Coords>& cols) const {
    const Field& f = ctx_.field();
    const std::size_t j = cols.size() - 1;
    Coords img(ctx_.dim());
    for (const auto& v : by_support_[j]) {
      std::fill(img.begin(), img.end(), 0);
      for (std::size_t c = 0; c <= j; ++c)
        if (v[c])
          for (std::size_t i = 0; i < img.size(); ++i) img[i] = f.add(img[i], f.mul(v[c], cols[c][i]));
      if (!ctx_.in_x(img)) return false;
    }
    return true;
  }

  bool dfs(std::vector<Coords>& cols, PartResult& res, std::uint64_t cap) const {
    const Field& f = ctx_.field();
    const std::size_t n = ctx_.dim();
    if (!supported_ok(cols)) return false;
    if (cols.size() == n) {
      Matrix m = multiply(f, columns(cols, n), sinv_);
      if (auto c = ctx_.accepts(m)) {
        res.witness = std::move(m);
        res.scalar = *c;
        return true;
      }
      return false;
    }
    Coords v(n, 0);
    const std::uint64_t total = ipow(f.order(), static_cast<unsigned>(n));
    for (std::uint64_t code = 1; code < total; ++code) {
      if (res.nodes >= cap) {
        res.exhausted = true;
        return false;
      }
      ++res.nodes;
      std::uint64_t r = code;
      for (std::size_t i = 0; i < n; ++i, r /= f.order()) v[i] = static_cast<Elem>(r % f.order());
      Matrix m(cols.size() + 1, n);
      for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = cols[a][b];
      for (std::size_t b = 0; b < n; ++b) m(cols.size(), b) = v[b];
      if (rank(f, m) != cols.size() + 1) continue;
      cols.push_back(v);
      if (dfs(cols, res, cap)) return true;
      cols.pop_back();
      if (res.exhausted) return false;
    }
    return false;
  }

  const SearchContext& ctx_;
  Matrix s_, sinv_;
  std::vector<std::vector<Coords>> by_support_;
};

}  // namespace detail

/// Decide whether F∘M = c·G for some invertible M over F_q.
inline EquivalenceVerdict pgl_search(const Hypersurface& x, const Hypersurface& y, const SearchOptions& opt = {}) {
  EquivalenceVerdict out;
  if (!(x.field() == y.field())) return {Verdict::inequivalent, std::nullopt, 0, "field", "precheck", 0};
  if (x.ambient() != y.ambient()) return {Verdict::inequivalent, std::nullopt, 0, "ambient", "precheck", 0};
  if (x.degree() != y.degree()) return {Verdict::inequivalent, std::nullopt, 0, "degree", "precheck", 0};
  if (opt.use_fingerprint) {
    if (auto sep = separating_invariant(fingerprint(x, opt.jobs), fingerprint(y, opt.jobs)))
      return {Verdict::inequivalent, std::nullopt, 0, *sep, "fingerprint", 0};
  }
  const detail::SearchContext ctx(x, y);
  const Field& f = ctx.field();
  const std::size_t n = ctx.dim();
  if (ctx.px().size() != ctx.py().size()) return {Verdict::inequivalent, std::nullopt, 0, "count_q", "precheck", 0};

  auto finish = [&](const detail::PartResult& r, const char* method, std::uint64_t nodes) {
    const MultiPoly lhs = substitute_linear(x.poly(), *r.witness);
    if (!(lhs == y.poly().scale(r.scalar)) || determinant(f, *r.witness) == 0)
      throw std::logic_error("equivalence witness failed verification");
    return EquivalenceVerdict{Verdict::equivalent, r.witness, r.scalar, "witness", method, nodes};
  };

  // Partitions are processed in order; each is capped at the full budget so
  // its result does not depend on the worker count.
  auto exhaust = [&](std::size_t parts, auto&& run_part, const char* method) -> std::optional<EquivalenceVerdict> {
    std::uint64_t used = 0;
    const unsigned jobs = effective_jobs(opt.jobs);
    for (std::size_t start = 0; start < parts; start += jobs) {
      const std::size_t len = std::min<std::size_t>(jobs, parts - start);
      auto results = parallel_ranges(len, jobs, [&](std::uint64_t b, std::uint64_t e) {
        std::vector<detail::PartResult> rs;
        for (auto i = b; i < e; ++i) rs.push_back(run_part(start + i, opt.budget));
        return rs;
      });
      for (auto& chunk : results)
        for (auto& r : chunk) {
          used += r.nodes;
          if (r.exhausted || used > opt.budget) return EquivalenceVerdict{Verdict::inconclusive, std::nullopt, 0, "budget", method, used};
          if (r.witness) return finish(r, method, used);
        }
    }
    return EquivalenceVerdict{Verdict::inequivalent, std::nullopt, 0, "exhaustive search found no witness", method, used};
  };

  EquivalenceVerdict verdict;
  std::optional<std::vector<Coords>> frame_points;
  if (auto frame = detail::find_frame(f, ctx.py(), n)) {
    std::vector<Coords> yf;
    for (auto i : *frame) yf.push_back(ctx.py()[i]);
    frame_points = yf;
    const detail::FrameSearch fs(ctx, yf);
    verdict = *exhaust(ctx.px().size(), [&](std::size_t i, std::uint64_t cap) { return fs.run(i, cap); }, "frame");
  } else {
    const detail::PglScan scan(ctx);
    const auto firsts = scan.first_columns(x.field_ptr());
    verdict = *exhaust(firsts.size(), [&](std::size_t i, std::uint64_t cap) { return scan.run(firsts[i], cap); }, "pgl-scan");
  }
  if (verdict.status != Verdict::inconclusive) return verdict;

  // Seeded random phase: random ordered tuples of X-points as frame images.
  if (frame_points && ctx.px().size() >= n + 1) {
    Rng rng(opt.seed);
    const std::uint64_t samples = opt.budget / 4;
    std::uint64_t nodes = verdict.candidates;
    for (std::uint64_t s = 0; s < samples; ++s) {
      std::vector<Coords> cols;
      for (std::size_t i = 0; i < n + 1; ++i) cols.push_back(ctx.px()[uniform_below(rng, ctx.px().size())]);
      ++nodes;
      const Matrix a = detail::columns({cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(n)}, n);
      if (determinant(f, a) == 0) continue;
      const auto alpha = solve(f, a, cols[n]);
      if (!alpha || std::any_of(alpha->begin(), alpha->end(), [](Elem c) { return c == 0; })) continue;
      const Matrix b = detail::columns({frame_points->begin(), frame_points->begin() + static_cast<std::ptrdiff_t>(n)}, n);
      const Matrix binv = inverse(f, b);
      const auto beta = apply(f, binv, (*frame_points)[n]);
      Matrix d(n, n);
      for (std::size_t i = 0; i < n; ++i) d(i, i) = f.div((*alpha)[i], beta[i]);
      Matrix m = multiply(f, multiply(f, a, d), binv);
      if (auto c = ctx.accepts(m)) {
        detail::PartResult r;
        r.witness = std::move(m);
        r.scalar = *c;
        return finish(r, "random-frame", nodes);
      }
    }
    verdict.candidates = nodes;
    verdict.method = "random-frame";
  }
  return verdict;
}

}  // namespace hkb

#endif  // HKB_EQUIVALENCE_HPP
