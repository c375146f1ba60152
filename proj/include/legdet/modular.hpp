#pragma once

// Word-sized modular arithmetic. Every modulus is assumed to be < 2^63 so
// that sums of two residues never wrap.

#include <cstdint>

#include <gmpxx.h>

namespace legdet::mod {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 sub(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 mul(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base, m);
    base = mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Inverse of a modulo m; a must be a unit.
inline u64 inv(u64 a, u64 m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

inline u64 from_signed(std::int64_t v, u64 m) {
  if (v >= 0) return static_cast<u64>(v) % m;
  u64 r = static_cast<u64>(-(v + 1)) % m;  // avoids negating INT64_MIN
  return m - 1 - r;
}

inline u64 from_mpz(const mpz_class& v, u64 m) {
  static_assert(sizeof(unsigned long) == sizeof(u64));
  return mpz_fdiv_ui(v.get_mpz_t(), m);
}

}  // namespace legdet::mod
