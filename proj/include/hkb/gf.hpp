#ifndef HKB_GF_HPP
#define HKB_GF_HPP

// Finite fields F_{p^s} with table-backed arithmetic.
//
// An element is stored as its integer code: the coefficients of the residue
// polynomial modulo the field's modulus, read as base-p digits with the
// constant term as the least significant digit. Multiplication goes through
// exp/log tables of a fixed primitive element; addition in fields that are
// neither binary nor prime goes through a Zech logarithm table, so every
// operation is O(1) once the field is built.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hkb/error.hpp"

namespace hkb {

using Elem = std::uint32_t;

inline constexpr std::uint32_t kDefaultFieldCap = 1u << 16;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<unsigned> to_digits(Elem code, unsigned p, unsigned s) {
  std::vector<unsigned> d(s);
  for (unsigned i = 0; i < s; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

inline Elem from_digits(const std::vector<unsigned>& d, unsigned p) {
  Elem code = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) code = code * p + *it;
  return code;
}

// Polynomials over F_p as coefficient vectors, constant term first.
inline void fp_trim(std::vector<unsigned>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial m.
inline std::vector<unsigned> fp_rem(std::vector<unsigned> a, const std::vector<unsigned>& m, unsigned p) {
  fp_trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + (p - lead) * m[i]) % p;
    fp_trim(a);
  }
  return a;
}

inline bool fp_irreducible(const std::vector<unsigned>& f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  if (deg <= 1) return deg == 1;
  // trial division by every monic polynomial of degree 1..deg/2
  for (unsigned k = 1; 2 * k <= deg; ++k) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      std::vector<unsigned> g = to_digits(static_cast<Elem>(c), p, k);
      g.push_back(1);
      if (fp_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

// Smallest monic irreducible of degree s, comparing coefficient vectors
// lexicographically with the constant term first.
inline std::vector<unsigned> smallest_irreducible(unsigned p, unsigned s) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < s; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<unsigned> f(s + 1, 0);
    std::uint64_t rest = idx;
    for (unsigned j = 0; j < s; ++j) {  // c_0 is the most significant digit of idx
      f[s - 1 - j] = static_cast<unsigned>(rest % p);
      rest /= p;
    }
    f[s] = 1;
    if (fp_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

inline Elem mulmod_codes(Elem a, Elem b, unsigned p, unsigned s, const std::vector<unsigned>& modulus) {
  const auto da = to_digits(a, p, s);
  const auto db = to_digits(b, p, s);
  std::vector<unsigned> prod(2 * s, 0);
  for (unsigned i = 0; i < s; ++i)
    for (unsigned j = 0; j < s; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  auto r = fp_rem(prod, modulus, p);
  r.resize(s, 0);
  return from_digits(r, p);
}

inline Elem addmod_codes(Elem a, Elem b, unsigned p, unsigned s) {
  auto da = to_digits(a, p, s);
  const auto db = to_digits(b, p, s);
  for (unsigned i = 0; i < s; ++i) da[i] = (da[i] + db[i]) % p;
  return from_digits(da, p);
}

}  // namespace detail

class Field {
 public:
  Field(unsigned p, unsigned s, std::uint32_t cap = kDefaultFieldCap) : p_(p), s_(s) {
    if (!detail::is_prime(p))
      throw error(errc::non_prime_characteristic, std::to_string(p) + " is not prime");
    if (s < 1) throw error(errc::invalid_argument, "extension degree must be >= 1");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < s; ++i) {
      q *= p;
      if (q > cap)
        throw error(errc::field_too_large,
                    std::to_string(p) + "^" + std::to_string(s) + " exceeds cap " + std::to_string(cap));
    }
    q_ = static_cast<std::uint32_t>(q);
    modulus_ = s == 1 ? std::vector<unsigned>{0, 1} : detail::smallest_irreducible(p, s);
    build_tables();
  }

  unsigned characteristic() const noexcept { return p_; }
  unsigned degree() const noexcept { return s_; }
  std::uint32_t order() const noexcept { return q_; }
  const std::vector<unsigned>& modulus() const noexcept { return modulus_; }
  Elem generator() const noexcept { return generator_; }
  bool contains(Elem a) const noexcept { return a < q_; }

  std::string name() const { return "F" + std::to_string(q_); }

  bool operator==(const Field& o) const noexcept { return p_ == o.p_ && s_ == o.s_; }

  /// Discrete log base generator(); -1 for zero.
  int log(Elem a) const noexcept { return log_[a]; }
  Elem exp(std::uint64_t k) const noexcept { return exp_[k % (q_ - 1)]; }

  Elem add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return a ^ b;
    if (s_ == 1) return (a + b) % p_;
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint32_t n = q_ - 1;
    const int la = log_[a];
    const int lb = log_[b];
    const int z = zech_[(lb - la + static_cast<int>(n)) % static_cast<int>(n)];
    if (z < 0) return 0;
    return exp_[static_cast<std::uint32_t>(la + z)];
  }

  Elem neg(Elem a) const noexcept {
    if (p_ == 2) return a;
    if (s_ == 1) return a == 0 ? 0 : p_ - a;
    return neg_[a];
  }

  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[static_cast<std::uint32_t>(log_[a] + log_[b])];
  }

  Elem inv(Elem a) const {
    if (a == 0) throw error(errc::division_by_zero, "inverse of zero in " + name());
    return exp_[(q_ - 1 - static_cast<std::uint32_t>(log_[a])) % (q_ - 1)];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t n = q_ - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % n)) % n];
  }

  /// x -> x^(p^t); t = degree() is the identity.
  Elem frobenius(Elem a, unsigned t) const noexcept {
    std::uint64_t e = 1;
    for (unsigned i = 0; i < t % s_; ++i) e *= p_;
    return pow(a, e);
  }

  /// The conjugation order sqrt(q) used by Hermitian forms.
  std::uint32_t sqrt_order() const {
    if (s_ % 2 != 0) throw error(errc::not_a_square, name() + " has odd extension degree");
    std::uint32_t r = 1;
    for (unsigned i = 0; i < s_ / 2; ++i) r *= p_;
    return r;
  }

  bool is_square_order() const noexcept { return s_ % 2 == 0; }

 private:
  void build_tables() {
    const std::uint32_t n = q_ - 1;
    auto mulc = [&](Elem a, Elem b) { return detail::mulmod_codes(a, b, p_, s_, modulus_); };
    // smallest primitive element by code
    generator_ = 0;
    for (Elem g = 1; g < q_ && generator_ == 0; ++g) {
      std::uint32_t order = 1;
      Elem x = g;
      while (x != 1) {
        x = mulc(x, g);
        ++order;
      }
      if (order == n) generator_ = g;
    }
    exp_.assign(2 * static_cast<std::size_t>(n), 0);
    log_.assign(q_, -1);
    Elem x = 1;
    for (std::uint32_t k = 0; k < n; ++k) {
      exp_[k] = x;
      exp_[k + n] = x;
      log_[x] = static_cast<int>(k);
      x = mulc(x, generator_);
    }
    if (s_ > 1 && p_ != 2) {
      zech_.assign(n, -1);
      for (std::uint32_t k = 0; k < n; ++k) zech_[k] = log_[detail::addmod_codes(1, exp_[k], p_, s_)];
      neg_.assign(q_, 0);
      for (Elem a = 0; a < q_; ++a) {
        auto d = detail::to_digits(a, p_, s_);
        for (auto& c : d) c = (p_ - c) % p_;
        neg_[a] = detail::from_digits(d, p_);
      }
    }
  }

  unsigned p_;
  unsigned s_;
  std::uint32_t q_ = 0;
  std::vector<unsigned> modulus_;
  Elem generator_ = 1;
  std::vector<Elem> exp_;
  std::vector<int> log_;
  std::vector<int> zech_;
  std::vector<Elem> neg_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(unsigned p, unsigned s, std::uint32_t cap = kDefaultFieldCap) {
  return std::make_shared<const Field>(p, s, cap);
}

/// Process-wide memoized fields; tables are built once per (p, s).
inline FieldPtr get_field(unsigned p, unsigned s) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, FieldPtr> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{p, s}];
  if (!slot) slot = make_field(p, s);
  return slot;
}

/// Field with q^t elements containing `base`, capped like every other field.
inline FieldPtr extension_field(const Field& base, unsigned t) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < base.degree() * t; ++i) {
    q *= base.characteristic();
    if (q > kDefaultFieldCap)
      throw error(errc::field_too_large, base.name() + " extension of degree " + std::to_string(t));
  }
  return get_field(base.characteristic(), base.degree() * t);
}

/// Injective ring homomorphism F_q -> F_{q^t}, as a lookup table.
class Embedding {
 public:
  Embedding(FieldPtr small, FieldPtr big) : small_(std::move(small)), big_(std::move(big)) {
    if (small_->characteristic() != big_->characteristic() || big_->degree() % small_->degree() != 0)
      throw error(errc::not_a_subfield, small_->name() + " does not embed in " + big_->name());
    const unsigned p = small_->characteristic();
    const auto& m = small_->modulus();
    // smallest root (by code) of the small modulus in the big field
    Elem root = 0;
    bool found = false;
    for (Elem r = 0; r < big_->order() && !found; ++r) {
      Elem acc = 0;
      for (auto it = m.rbegin(); it != m.rend(); ++it) acc = big_->add(big_->mul(acc, r), *it);
      if (acc == 0) {
        root = r;
        found = true;
      }
    }
    if (!found) throw std::logic_error("embedding root not found");
    table_.resize(small_->order());
    for (Elem a = 0; a < small_->order(); ++a) {
      const auto d = detail::to_digits(a, p, small_->degree());
      Elem acc = 0;
      Elem power = 1;
      for (unsigned c : d) {
        acc = big_->add(acc, big_->mul(c, power));
        power = big_->mul(power, root);
      }
      table_[a] = acc;
    }
  }

  Elem operator()(Elem a) const { return table_.at(a); }
  const FieldPtr& source() const noexcept { return small_; }
  const FieldPtr& target() const noexcept { return big_; }

 private:
  FieldPtr small_;
  FieldPtr big_;
  std::vector<Elem> table_;
};

inline Embedding embed(const FieldPtr& small, const FieldPtr& big) { return Embedding(small, big); }

}  // namespace hkb

#endif  // HKB_GF_HPP
