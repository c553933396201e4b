#ifndef HKB_BOUNDS_HPP
#define HKB_BOUNDS_HPP

// Bound formulas in unbounded integer arithmetic.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "hkb/error.hpp"

namespace hkb {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(std::uint64_t q, unsigned e) {
  return boost::multiprecision::pow(BigInt(q), e);
}

/// q^N + ... + q + 1
inline BigInt proj_space_count(unsigned n, std::uint64_t q) {
  BigInt r = 0;
  for (unsigned i = 0; i <= n; ++i) r += big_pow(q, i);
  return r;
}

/// (d-1) q^n + d q^{n-1} + q^{n-2} + ... + 1, defined for n >= 2.
inline BigInt theta(unsigned n, unsigned d, std::uint64_t q) {
  if (n < 2) throw error(errc::unsupported_dimension, "theta is defined for dimension n >= 2");
  if (d < 1 || q < 2) throw error(errc::invalid_argument, "theta needs d >= 1 and q >= 2");
  return BigInt(d - 1) * big_pow(q, n) + BigInt(d) * big_pow(q, n - 1) + proj_space_count(n - 2, q);
}

/// d q^n + q^{n-1} + ... + 1
inline BigInt serre_bound(unsigned n, unsigned d, std::uint64_t q) {
  if (n < 1) throw error(errc::unsupported_dimension, "serre bound needs n >= 1");
  return BigInt(d) * big_pow(q, n) + proj_space_count(n - 1, q);
}

/// (d-1) q + 2 for plane curves; equality only at d = q = 4.
inline BigInt sziklai_bound(unsigned d, std::uint64_t q) {
  if (d < 2) throw error(errc::invalid_argument, "sziklai bound needs d >= 2");
  return BigInt(d - 1) * q + 2;
}

inline bool sziklai_equality_possible(unsigned d, std::uint64_t q) { return d == 4 && q == 4; }

/// (d-1)(d-2)/2
inline BigInt arithmetic_genus(unsigned d) {
  if (d < 1) throw error(errc::invalid_argument, "degree must be >= 1");
  return d >= 2 ? BigInt(d - 1) * (d - 2) / 2 : BigInt(0);
}

/// q + 1 + floor(2 p_C sqrt(q)); the floor is taken exactly as isqrt(4 p_C^2 q).
inline BigInt aubry_perret_bound(unsigned d, std::uint64_t q) {
  const BigInt pc = arithmetic_genus(d);
  const BigInt disc = 4 * pc * pc * q;
  return BigInt(q) + 1 + boost::multiprecision::sqrt(disc);
}

}  // namespace hkb

#endif  // HKB_BOUNDS_HPP
