#ifndef HKB_POLY_HPP
#define HKB_POLY_HPP

// Sparse multivariate polynomials over a finite field.
//
// Terms are kept in graded-lexicographic order, highest first, with no zero
// coefficients, so two polynomials are equal iff their term vectors are.
// Exponent vectors are dense (one entry per variable X_0..X_N).

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hkb/error.hpp"
#include "hkb/gf.hpp"
#include "hkb/linalg.hpp"

namespace hkb {

using Exponents = std::vector<unsigned>;
using LinearForm = std::vector<Elem>;

struct Term {
  Exponents exps;
  Elem coeff = 0;

  bool operator==(const Term&) const = default;
};

inline unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

/// Graded lex: higher total degree first, then lexicographic with X_0 most significant.
inline bool grlex_greater(const Exponents& a, const Exponents& b) {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_greater(a, b); }
};

class MultiPoly {
 public:
  MultiPoly(FieldPtr field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {}

  static MultiPoly from_terms(FieldPtr field, std::size_t nvars, std::vector<Term> terms) {
    MultiPoly r(std::move(field), nvars);
    std::map<Exponents, Elem, GrlexGreater> acc;
    for (auto& t : terms) {
      if (t.exps.size() != nvars) throw error(errc::dimension_mismatch, "exponent vector length");
      if (!r.field_->contains(t.coeff)) throw error(errc::invalid_argument, "coefficient code out of range");
      auto [it, inserted] = acc.try_emplace(std::move(t.exps), t.coeff);
      if (!inserted) it->second = r.field_->add(it->second, t.coeff);
    }
    r.adopt(acc);
    return r;
  }

  static MultiPoly constant(FieldPtr field, std::size_t nvars, Elem c) {
    return from_terms(std::move(field), nvars, {Term{Exponents(nvars, 0), c}});
  }

  static MultiPoly monomial(FieldPtr field, std::size_t nvars, Exponents e, Elem c = 1) {
    return from_terms(std::move(field), nvars, {Term{std::move(e), c}});
  }

  static MultiPoly variable(FieldPtr field, std::size_t nvars, std::size_t i) {
    Exponents e(nvars, 0);
    e.at(i) = 1;
    return monomial(std::move(field), nvars, std::move(e));
  }

  /// sum_i coeffs[i] * X_i
  static MultiPoly linear(FieldPtr field, std::span<const Elem> coeffs) {
    std::vector<Term> ts;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Exponents e(coeffs.size(), 0);
      e[i] = 1;
      ts.push_back({std::move(e), coeffs[i]});
    }
    return from_terms(std::move(field), coeffs.size(), std::move(ts));
  }

  const Field& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  unsigned total_degree() const { return terms_.empty() ? 0 : hkb::total_degree(terms_.front().exps); }

  bool is_homogeneous() const {
    const unsigned d = total_degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const Term& t) { return hkb::total_degree(t.exps) == d; });
  }

  Elem coefficient(const Exponents& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Exponents& x) { return grlex_greater(t.exps, x); });
    return (it != terms_.end() && it->exps == e) ? it->coeff : 0;
  }

  /// Whether variable i occurs in some term.
  bool uses_variable(std::size_t i) const {
    return std::any_of(terms_.begin(), terms_.end(), [i](const Term& t) { return t.exps[i] != 0; });
  }

  MultiPoly operator+(const MultiPoly& o) const {
    check_compatible(o);
    std::vector<Term> ts = terms_;
    ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(field_, nvars_, std::move(ts));
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coeff = field_->neg(t.coeff);
    return r;
  }

  MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

  MultiPoly scale(Elem c) const {
    if (c == 0) return MultiPoly(field_, nvars_);
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coeff = field_->mul(t.coeff, c);
    return r;
  }

  MultiPoly operator*(const MultiPoly& o) const {
    check_compatible(o);
    std::map<Exponents, Elem, GrlexGreater> acc;
    Exponents e(nvars_);
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        for (std::size_t i = 0; i < nvars_; ++i) e[i] = a.exps[i] + b.exps[i];
        const Elem c = field_->mul(a.coeff, b.coeff);
        auto [it, inserted] = acc.try_emplace(e, c);
        if (!inserted) it->second = field_->add(it->second, c);
      }
    MultiPoly r(field_, nvars_);
    r.adopt(acc);
    return r;
  }

  MultiPoly pow(unsigned k) const {
    MultiPoly result = constant(field_, nvars_, 1);
    MultiPoly base = *this;
    while (k) {
      if (k & 1u) result = result * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return result;
  }

  bool operator==(const MultiPoly& o) const {
    return *field_ == *o.field_ && nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  Elem evaluate(std::span<const Elem> x) const {
    if (x.size() != nvars_) throw error(errc::dimension_mismatch, "evaluation point has wrong length");
    const Field& f = *field_;
    Elem sum = 0;
    for (const auto& t : terms_) {
      Elem v = t.coeff;
      for (std::size_t i = 0; i < nvars_ && v != 0; ++i)
        if (t.exps[i]) v = f.mul(v, f.pow(x[i], t.exps[i]));
      sum = f.add(sum, v);
    }
    return sum;
  }

  /// Same exponents, coefficients pushed through `fn` into `target`.
  template <class Fn>
  MultiPoly map_coefficients(FieldPtr target, Fn&& fn) const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_) ts.push_back({t.exps, fn(t.coeff)});
    return from_terms(std::move(target), nvars_, std::move(ts));
  }

  /// Removes variable k, which must not occur.
  MultiPoly drop_variable(std::size_t k) const {
    std::vector<Term> ts;
    for (const auto& t : terms_) {
      if (t.exps[k] != 0) throw error(errc::invalid_argument, "dropped variable occurs in polynomial");
      Exponents e = t.exps;
      e.erase(e.begin() + static_cast<std::ptrdiff_t>(k));
      ts.push_back({std::move(e), t.coeff});
    }
    return from_terms(field_, nvars_ - 1, std::move(ts));
  }

 private:
  void check_compatible(const MultiPoly& o) const {
    if (!(*field_ == *o.field_) || nvars_ != o.nvars_)
      throw error(errc::dimension_mismatch, "polynomials over different rings");
  }

  void adopt(std::map<Exponents, Elem, GrlexGreater>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) terms_.push_back({e, c});
  }

  FieldPtr field_;
  std::size_t nvars_;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// text form

inline std::string render(const MultiPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& t : f.terms()) {
    if (!out.empty()) out += '+';
    std::string mono;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += 'x' + std::to_string(i);
      if (t.exps[i] > 1) mono += '^' + std::to_string(t.exps[i]);
    }
    if (mono.empty())
      out += std::to_string(t.coeff);
    else if (t.coeff == 1)
      out += mono;
    else
      out += std::to_string(t.coeff) + '*' + mono;
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, const FieldPtr& field) : field_(field) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  // Terms as (sign, coefficient, [(var, exp)]) before the variable count is known.
  struct RawTerm {
    bool negate = false;
    Elem coeff = 1;
    std::vector<std::pair<std::size_t, unsigned>> powers;
  };

  std::vector<RawTerm> parse() {
    if (s_.empty()) fail("empty polynomial");
    std::vector<RawTerm> out;
    bool first = true;
    while (pos_ < s_.size() || first) {
      RawTerm t;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        t.negate = s_[pos_] == '-';
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      parse_term(t);
      out.push_back(std::move(t));
      first = false;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw error(errc::syntax_error, what + " at offset " + std::to_string(pos_));
  }

  std::uint64_t number() {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(s_[pos_] - '0');
      if (v > std::numeric_limits<std::uint32_t>::max()) fail("number too large");
      ++pos_;
    }
    return v;
  }

  void parse_factor(RawTerm& t) {
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == 'x' || c == 'X') {
      ++pos_;
      const auto var = static_cast<std::size_t>(number());
      unsigned e = 1;
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        e = static_cast<unsigned>(number());
      }
      t.powers.emplace_back(var, e);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const auto code = number();
      if (code >= field_->order())
        fail("coefficient code " + std::to_string(code) + " not in " + field_->name());
      t.coeff = field_->mul(t.coeff, static_cast<Elem>(code));
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  void parse_term(RawTerm& t) {
    parse_factor(t);
    while (pos_ < s_.size() && s_[pos_] == '*') {
      ++pos_;
      parse_factor(t);
    }
  }

  const FieldPtr& field_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the text grammar: `+`/`-` separated terms, each a `*`-joined
/// product of coefficient codes and powers `x<i>^<e>`. Without `nvars`
/// the variable count is one more than the largest index used.
inline MultiPoly parse(std::string_view text, const FieldPtr& field, std::optional<std::size_t> nvars = std::nullopt) {
  detail::PolyParser parser(text, field);
  auto raw = parser.parse();
  std::size_t n = 0;
  for (const auto& t : raw)
    for (const auto& [v, e] : t.powers) n = std::max(n, v + 1);
  if (nvars) {
    if (n > *nvars)
      throw error(errc::variable_index_out_of_range,
                  "variable x" + std::to_string(n - 1) + " with only " + std::to_string(*nvars) + " variables");
    n = *nvars;
  }
  std::vector<Term> terms;
  for (const auto& t : raw) {
    Exponents e(n, 0);
    for (const auto& [v, k] : t.powers) e[v] += k;
    terms.push_back({std::move(e), t.negate ? field->neg(t.coeff) : t.coeff});
  }
  return MultiPoly::from_terms(field, n, std::move(terms));
}

// ---------------------------------------------------------------------------
// hypersurfaces

/// A nonzero homogeneous form and the projective space it lives in.
/// Ambient dimension 1 is allowed so that line sections of plane curves stay
/// representable; user-facing entry points require N >= 2.
class Hypersurface {
 public:
  explicit Hypersurface(MultiPoly poly) : poly_(std::move(poly)) {
    if (poly_.is_zero()) throw error(errc::zero_form, "zero polynomial defines no hypersurface");
    if (!poly_.is_homogeneous()) throw error(errc::inhomogeneous_where_required, render(poly_));
    if (poly_.nvars() < 2) throw error(errc::unsupported_dimension, "need at least two variables");
    if (poly_.total_degree() < 1) throw error(errc::invalid_argument, "constant form");
  }

  const MultiPoly& poly() const noexcept { return poly_; }
  const Field& field() const noexcept { return poly_.field(); }
  const FieldPtr& field_ptr() const noexcept { return poly_.field_ptr(); }
  std::size_t ambient() const noexcept { return poly_.nvars() - 1; }
  unsigned degree() const { return poly_.total_degree(); }

  bool operator==(const Hypersurface&) const = default;

 private:
  MultiPoly poly_;
};

inline Hypersurface parse_hypersurface(std::string_view text, const FieldPtr& field,
                                       std::optional<std::size_t> nvars = std::nullopt) {
  auto f = parse(text, field, nvars);
  if (!f.is_homogeneous()) throw error(errc::inhomogeneous_where_required, std::string(text));
  if (f.nvars() < 3) throw error(errc::unsupported_dimension, "hypersurfaces need ambient dimension >= 2");
  return Hypersurface(std::move(f));
}

// ---------------------------------------------------------------------------
// calculus and substitutions

inline MultiPoly partial_derivative(const MultiPoly& f, std::size_t i) {
  if (i >= f.nvars()) throw error(errc::variable_index_out_of_range, "derivative variable");
  const Field& fld = f.field();
  std::vector<Term> ts;
  for (const auto& t : f.terms()) {
    const unsigned e = t.exps[i];
    if (e % fld.characteristic() == 0) continue;
    Term d{t.exps, 0};
    d.exps[i] = e - 1;
    Elem mult = 0;
    for (unsigned k = 0; k < e % fld.characteristic(); ++k) mult = fld.add(mult, 1);
    d.coeff = fld.mul(t.coeff, mult);
    ts.push_back(std::move(d));
  }
  return MultiPoly::from_terms(f.field_ptr(), f.nvars(), std::move(ts));
}

/// Substitutes X_i -> sum_j m(i, j) Y_j, where m has one row per variable of
/// f and one column per new variable. No invertibility requirement.
inline MultiPoly substitute_linear(const MultiPoly& f, const Matrix& m) {
  if (m.rows != f.nvars()) throw error(errc::dimension_mismatch, "substitution matrix rows");
  const FieldPtr& fp = f.field_ptr();
  const std::size_t nv = m.cols;
  std::vector<std::vector<MultiPoly>> powers(f.nvars());
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    powers[i].push_back(MultiPoly::constant(fp, nv, 1));
    powers[i].push_back(MultiPoly::linear(fp, m.row(i)));
  }
  auto power_of = [&](std::size_t i, unsigned e) -> const MultiPoly& {
    auto& cache = powers[i];
    while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
    return cache[e];
  };
  std::vector<Term> acc;
  for (const auto& t : f.terms()) {
    MultiPoly prod = MultiPoly::constant(fp, nv, t.coeff);
    for (std::size_t i = 0; i < f.nvars() && !prod.is_zero(); ++i)
      if (t.exps[i]) prod = prod * power_of(i, t.exps[i]);
    acc.insert(acc.end(), prod.terms().begin(), prod.terms().end());
  }
  return MultiPoly::from_terms(fp, nv, std::move(acc));
}

/// F∘M: X_i -> sum_j M[i][j] X_j for invertible square M. A right action:
/// linear_change(F, M*N) == linear_change(linear_change(F, M), N).
inline MultiPoly linear_change(const MultiPoly& f, const Matrix& m) {
  if (m.rows != f.nvars() || m.cols != f.nvars()) throw error(errc::dimension_mismatch, "change matrix shape");
  if (determinant(f.field(), m) == 0) throw error(errc::singular_matrix, "coordinate change is not invertible");
  return substitute_linear(f, m);
}

inline Hypersurface linear_change(const Hypersurface& x, const Matrix& m) {
  return Hypersurface(linear_change(x.poly(), m));
}

/// Binary form sum_k coeffs[k] u^(d-k) v^k.
struct BinaryForm {
  FieldPtr field;
  std::vector<Elem> coeffs;

  unsigned degree() const { return static_cast<unsigned>(coeffs.size() - 1); }
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](Elem c) { return c == 0; });
  }

  Elem evaluate(Elem u, Elem v) const {
    const Field& f = *field;
    Elem acc = 0;
    const unsigned d = degree();
    for (unsigned k = 0; k <= d; ++k)
      acc = f.add(acc, f.mul(coeffs[k], f.mul(f.pow(u, d - k), f.pow(v, k))));
    return acc;
  }

  /// Multiplicity of (u0 : v0) as a root; max() for the zero form.
  unsigned root_multiplicity(Elem u0, Elem v0) const {
    if (is_zero()) return std::numeric_limits<unsigned>::max();
    const Field& f = *field;
    if (v0 == 0) {  // point (1:0): lowest power of v present
      unsigned k = 0;
      while (coeffs[k] == 0) ++k;
      return k;
    }
    // P(x) = sum_k coeffs[k] x^(d-k), root x0 = u0/v0
    const Elem x0 = f.div(u0, v0);
    std::vector<Elem> p(coeffs.begin(), coeffs.end());  // highest power first
    while (!p.empty() && p.front() == 0) p.erase(p.begin());
    unsigned mult = 0;
    while (p.size() > 1) {
      std::vector<Elem> q(p.size() - 1);
      Elem carry = 0;
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        carry = f.add(f.mul(carry, x0), p[i]);
        q[i] = carry;
      }
      const Elem rem = f.add(f.mul(carry, x0), p.back());
      if (rem != 0) break;
      ++mult;
      p = std::move(q);
    }
    return mult;
  }
};

inline bool proportional(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  Matrix m(2, a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    m(0, j) = a[j];
    m(1, j) = b[j];
  }
  return rank(f, m) < 2;
}

/// F(u*p0 + v*p1), exactly; the zero form iff the line lies in X.
inline BinaryForm restrict_to_line(const MultiPoly& f, std::span<const Elem> p0, std::span<const Elem> p1) {
  if (p0.size() != f.nvars() || p1.size() != f.nvars())
    throw error(errc::dimension_mismatch, "line points have wrong length");
  const Field& fld = f.field();
  if (proportional(fld, p0, p1)) throw error(errc::dependent_points, "points do not span a line");
  const unsigned d = f.total_degree();
  auto mul = [&](const std::vector<Elem>& a, const std::vector<Elem>& b) {
    std::vector<Elem> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i])
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = fld.add(r[i + j], fld.mul(a[i], b[j]));
    return r;
  };
  std::vector<std::vector<std::vector<Elem>>> powers(f.nvars());
  for (std::size_t i = 0; i < f.nvars(); ++i) powers[i] = {{1}, {p0[i], p1[i]}};
  BinaryForm out{f.field_ptr(), std::vector<Elem>(d + 1, 0)};
  for (const auto& t : f.terms()) {
    std::vector<Elem> prod{t.coeff};
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      const unsigned e = t.exps[i];
      if (!e) continue;
      auto& cache = powers[i];
      while (cache.size() <= e) cache.push_back(mul(cache.back(), cache[1]));
      prod = mul(prod, cache[e]);
    }
    // prod has length deg(t)+1; homogeneous input means deg(t) == d
    for (std::size_t k = 0; k < prod.size() && k <= d; ++k) out.coeffs[k] = fld.add(out.coeffs[k], prod[k]);
  }
  return out;
}

/// Exact divisibility by a linear form. Moves L to a coordinate by the change
/// Y_k = L(X) (k = first nonzero coefficient), tests that every monomial
/// contains Y_k, divides, and pulls the quotient back. The result is
/// re-verified by multiplication.
inline std::optional<MultiPoly> divides_linear(const MultiPoly& f, std::span<const Elem> l) {
  if (l.size() != f.nvars()) throw error(errc::dimension_mismatch, "linear form length");
  const Field& fld = f.field();
  const auto it = std::find_if(l.begin(), l.end(), [](Elem c) { return c != 0; });
  if (it == l.end()) throw error(errc::invalid_argument, "zero linear form");
  const std::size_t k = static_cast<std::size_t>(it - l.begin());
  const std::size_t n = f.nvars();
  if (f.is_zero()) return MultiPoly(f.field_ptr(), n);
  const Elem lk_inv = fld.inv(l[k]);
  // X = back * Y  with  X_k = lk^{-1} (Y_k - sum_{j != k} l_j Y_j)
  Matrix back = Matrix::identity(n);
  Matrix forward = Matrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    back(k, j) = j == k ? lk_inv : fld.neg(fld.mul(lk_inv, l[j]));
    forward(k, j) = l[j];
  }
  const MultiPoly g = substitute_linear(f, back);
  std::vector<Term> qt;
  for (const auto& t : g.terms()) {
    if (t.exps[k] == 0) return std::nullopt;
    Term r = t;
    --r.exps[k];
    qt.push_back(std::move(r));
  }
  MultiPoly quotient = substitute_linear(MultiPoly::from_terms(f.field_ptr(), n, std::move(qt)), forward);
  if (!(MultiPoly::linear(f.field_ptr(), l) * quotient == f))
    throw std::logic_error("divides_linear: quotient failed verification");
  return quotient;
}

/// G with G^p = F when every exponent of F is a multiple of p.
inline std::optional<MultiPoly> pth_power_root(const MultiPoly& f) {
  const Field& fld = f.field();
  const unsigned p = fld.characteristic();
  std::vector<Term> ts;
  for (const auto& t : f.terms()) {
    Term g{t.exps, fld.frobenius(t.coeff, fld.degree() - 1)};
    for (auto& e : g.exps) {
      if (e % p != 0) return std::nullopt;
      e /= p;
    }
    ts.push_back(std::move(g));
  }
  MultiPoly g = MultiPoly::from_terms(f.field_ptr(), f.nvars(), std::move(ts));
  if (!(g.pow(p) == f)) throw std::logic_error("pth_power_root: G^p != F");
  return g;
}

// ---------------------------------------------------------------------------
// sampling

/// Exponent vectors of degree d in nvars variables, grlex-descending.
inline std::vector<Exponents> monomials(std::size_t nvars, unsigned d) {
  std::vector<Exponents> out;
  Exponents cur(nvars, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == nvars) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
  };
  if (nvars > 0) rec(rec, 0, d);
  return out;
}

/// Uniform nonzero coefficient vector over all degree-d monomials.
inline MultiPoly random_form(const FieldPtr& f, std::size_t nvars, unsigned d, Rng& rng) {
  const auto monos = monomials(nvars, d);
  for (;;) {
    std::vector<Term> ts;
    for (const auto& m : monos) ts.push_back({m, static_cast<Elem>(uniform_below(rng, f->order()))});
    auto g = MultiPoly::from_terms(f, nvars, ts);
    if (!g.is_zero()) return g;
  }
}

// ---------------------------------------------------------------------------
// fast evaluation

/// Evaluation through discrete logs; the hot path of all point counting.
class CompiledPoly {
 public:
  static constexpr std::size_t kMaxVars = 32;

  explicit CompiledPoly(const MultiPoly& f) : field_(f.field_ptr()), nvars_(f.nvars()) {
    if (nvars_ > kMaxVars) throw error(errc::dimension_mismatch, "too many variables for compiled evaluation");
    for (const auto& t : f.terms()) {
      clog_.push_back(field_->log(t.coeff));
      exps_.insert(exps_.end(), t.exps.begin(), t.exps.end());
    }
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const Field& field() const noexcept { return *field_; }

  Elem operator()(std::span<const Elem> x) const {
    const Field& f = *field_;
    std::array<int, kMaxVars> lx;
    for (std::size_t i = 0; i < nvars_; ++i) lx[i] = f.log(x[i]);
    Elem sum = 0;
    const unsigned* e = exps_.data();
    for (std::size_t t = 0; t < clog_.size(); ++t, e += nvars_) {
      std::uint64_t acc = static_cast<std::uint64_t>(clog_[t]);
      bool zero = false;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (!e[i]) continue;
        if (lx[i] < 0) {
          zero = true;
          break;
        }
        acc += static_cast<std::uint64_t>(e[i]) * static_cast<std::uint64_t>(lx[i]);
      }
      if (!zero) sum = f.add(sum, f.exp(acc));
    }
    return sum;
  }

 private:
  FieldPtr field_;
  std::size_t nvars_;
  std::vector<unsigned> exps_;
  std::vector<int> clog_;
};

}  // namespace hkb

#endif  // HKB_POLY_HPP
