#pragma once

// Primality, Legendre symbols and the scalar invariants attached to an odd
// prime p = 2n + 1: the half-range symbol sum, h(-p), c_p, d_p, q_p and the
// pair count N.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "legdet/error.hpp"
#include "legdet/modular.hpp"

namespace legdet {

namespace detail {

inline bool miller_rabin_round(std::uint64_t n, std::uint64_t d, int s,
                               std::uint64_t witness) {
  std::uint64_t x = mod::pow(witness % n, d, n);
  if (x == 0 || x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mod::mul(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Deterministic for every 64-bit input (first twelve prime witnesses).
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (!detail::miller_rabin_round(n, d, s, a)) return false;
  }
  return true;
}

/// Exact below 2^64; probabilistic (GMP, 40 rounds) above.
inline bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline void require_odd_prime(std::uint64_t p) {
  if (p == 2 || !is_prime(p)) throw UsageError(std::to_string(p) + " is not an odd prime");
}

/// Jacobi symbol (a/m) for odd m > 0, by quadratic reciprocity.
inline int jacobi(std::int64_t a, std::uint64_t m) {
  if (m == 0 || (m & 1) == 0) throw UsageError("Jacobi symbol needs an odd positive modulus");
  std::uint64_t x = mod::from_signed(a, m);
  std::uint64_t y = m;
  int sign = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      std::uint64_t r = y & 7;
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(x, y);
    if ((x & 3) == 3 && (y & 3) == 3) sign = -sign;
    x %= y;
  }
  return y == 1 ? sign : 0;
}

inline int legendre(std::int64_t a, std::uint64_t p) {
  require_odd_prime(p);
  return jacobi(a, p);
}

/// Symbols (a/p) for every residue a in [0, p), built by squaring.
class LegendreTable {
 public:
  explicit LegendreTable(std::uint64_t p) : p_(p) {
    require_odd_prime(p);
    vals_.assign(p, -1);
    vals_[0] = 0;
    for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) {
      vals_[mod::mul(x, x, p)] = 1;
    }
  }

  std::uint64_t p() const { return p_; }
  std::uint64_t n() const { return (p_ - 1) / 2; }

  int operator()(std::int64_t a) const { return vals_[mod::from_signed(a, p_)]; }
  int at(std::uint64_t residue) const { return vals_[residue]; }

  std::span<const std::int8_t> values() const { return vals_; }

 private:
  std::uint64_t p_;
  std::vector<std::int8_t> vals_;
};

/// ((p-1)/2)! mod p.
inline std::uint64_t half_factorial_mod(std::uint64_t p) {
  std::uint64_t acc = 1;
  for (std::uint64_t k = 2; k <= (p - 1) / 2; ++k) acc = mod::mul(acc, k, p);
  return acc;
}

/// Smallest positive primitive root modulo the odd prime p.
inline std::uint64_t primitive_root(std::uint64_t p) {
  require_odd_prime(p);
  std::vector<std::uint64_t> factors;
  std::uint64_t m = p - 1;
  for (std::uint64_t q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      factors.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) factors.push_back(m);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (std::uint64_t q : factors) {
      if (mod::pow(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

/// Sum over x in [0, p) of ((x^2 + bx + c)/p), by direct summation.
inline std::int64_t quad_char_sum_direct(std::int64_t b, std::int64_t c, const LegendreTable& table) {
  const std::uint64_t p = table.p();
  const std::uint64_t br = mod::from_signed(b, p);
  const std::uint64_t cr = mod::from_signed(c, p);
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = mod::add(mod::mul(x, mod::add(x, br, p), p), cr, p);
    sum += table.at(v);
  }
  return sum;
}

/// p - 1 if p | b^2 - 4c, else -1.
inline std::int64_t quad_char_sum_closed(std::int64_t b, std::int64_t c, std::uint64_t p) {
  const std::uint64_t br = mod::from_signed(b, p);
  const std::uint64_t cr = mod::from_signed(c, p);
  const std::uint64_t disc = mod::sub(mod::mul(br, br, p), mod::mul(4 % p, cr, p), p);
  return disc == 0 ? static_cast<std::int64_t>(p) - 1 : -1;
}

/// Direct sum, asserted against the closed form (InternalError on mismatch).
inline std::int64_t quad_char_sum(std::int64_t b, std::int64_t c, const LegendreTable& table) {
  const std::uint64_t p = table.p();
  const std::int64_t sum = quad_char_sum_direct(b, c, table);
  if (sum != quad_char_sum_closed(b, c, p)) {
    throw InternalError("quadratic character sum mismatch at p=" + std::to_string(p));
  }
  return sum;
}

inline std::int64_t quad_char_sum(std::int64_t b, std::int64_t c, std::uint64_t p) {
  return quad_char_sum(b, c, LegendreTable(p));
}

struct HalfRangeSums {
  std::int64_t s1;   // sum_{k<=n} (k/p)
  std::int64_t s2;   // sum_{k<=n} k (k/p)
  std::int64_t sjk;  // sum_{j,k<=n} ((j+k)/p)
};

inline HalfRangeSums half_range_sums(const LegendreTable& table) {
  const std::uint64_t p = table.p();
  const std::uint64_t n = table.n();
  // prefix[i] = sum_{t=1}^{i} (t/p), i in [0, p)
  std::vector<std::int64_t> prefix(p, 0);
  for (std::uint64_t t = 1; t < p; ++t) prefix[t] = prefix[t - 1] + table.at(t);

  HalfRangeSums out{prefix[n], 0, 0};
  for (std::uint64_t k = 1; k <= n; ++k) {
    out.s2 += static_cast<std::int64_t>(k) * table.at(k);
    out.sjk += prefix[k + n] - prefix[k];
  }
  const std::int64_t closed = p % 4 == 1 ? 2 * out.s2 : -out.s1;
  if (out.sjk != closed) {
    throw InternalError("half-range double sum mismatch at p=" + std::to_string(p));
  }
  return out;
}

inline HalfRangeSums half_range_sums(std::uint64_t p) { return half_range_sums(LegendreTable(p)); }

/// h(-p) for a prime p = 3 (mod 4), p > 3, from the half-range symbol sum.
/// The result is cross-checked against Mordell's congruence
/// n! = (-1)^{(h+1)/2} (mod p).
inline std::int64_t class_number_neg(const LegendreTable& table) {
  const std::uint64_t p = table.p();
  if (p % 4 != 3 || p <= 3) {
    throw UsageError("h(-p) needs a prime p = 3 (mod 4) with p > 3, got " + std::to_string(p));
  }
  std::int64_t sum = 0;
  for (std::uint64_t j = 1; j <= table.n(); ++j) sum += table.at(j);
  const std::int64_t denom = 2 - table(2);
  if (sum % denom != 0) throw InternalError("h(-p): inexact division at p=" + std::to_string(p));
  const std::int64_t h = sum / denom;
  if (h < 1 || h % 2 == 0) throw InternalError("h(-p) is not a positive odd integer at p=" + std::to_string(p));

  const std::uint64_t expected = ((h + 1) / 2) % 2 == 0 ? 1 : p - 1;
  if (half_factorial_mod(p) != expected) {
    throw InternalError("h(-p) disagrees with Mordell's congruence at p=" + std::to_string(p));
  }
  return h;
}

inline std::int64_t class_number_neg(std::uint64_t p) { return class_number_neg(LegendreTable(p)); }

/// (-1)^{(h-1)/2} for odd h.
inline int class_sign(std::int64_t h) { return ((h - 1) / 2) % 2 == 0 ? 1 : -1; }

struct PrimeInvariants {
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  std::optional<std::int64_t> c_p;  // p = 3 (mod 4)
  std::int64_t d_p = 0;
  std::optional<std::int64_t> h_neg;  // p = 3 (mod 4), p > 3
  std::optional<mpq_class> q_p;       // p = 3 (mod 4), p > 3
  std::int64_t pair_count = 0;        // N: pairs (j,k) in [1,n]^2 with (j/p) = 1 = ((j+k)/p)
  std::int64_t sum_half = 0;          // sum_{j<=n} (j/p)
};

/// d_p in O(p): ((j^2+jk)/p) = (j/p)((j+k)/p), and the inner sum over k is
/// a difference of prefix sums.
inline std::int64_t d_p(const LegendreTable& table) {
  const std::uint64_t p = table.p();
  const std::uint64_t n = table.n();
  std::vector<std::int64_t> prefix(p, 0);
  for (std::uint64_t t = 1; t < p; ++t) prefix[t] = prefix[t - 1] + table.at(t);
  std::int64_t d = 0;
  for (std::uint64_t j = 1; j <= n; ++j) d += table.at(j) * (prefix[j + n] - prefix[j]);
  return d;
}

inline PrimeInvariants prime_invariants(const LegendreTable& table) {
  const std::uint64_t p = table.p();
  const std::uint64_t n = table.n();
  PrimeInvariants inv;
  inv.p = p;
  inv.n = n;

  std::vector<std::int64_t> prefix(p, 0);
  std::vector<std::int64_t> residues(p, 0);
  for (std::uint64_t t = 1; t < p; ++t) {
    prefix[t] = prefix[t - 1] + table.at(t);
    residues[t] = residues[t - 1] + (table.at(t) == 1 ? 1 : 0);
  }
  inv.sum_half = prefix[n];
  for (std::uint64_t j = 1; j <= n; ++j) {
    inv.d_p += table.at(j) * (prefix[j + n] - prefix[j]);
    if (table.at(j) == 1) inv.pair_count += residues[j + n] - residues[j];
  }

  if (p % 4 == 3) {
    inv.c_p = inv.sum_half;
    if (p > 3) {
      inv.h_neg = class_number_neg(table);
      if (*inv.c_p != (2 - table(2)) * *inv.h_neg) {
        throw InternalError("c_p disagrees with (2-(2/p))h(-p) at p=" + std::to_string(p));
      }
      const mpz_class c = *inv.c_p, d = inv.d_p, nn = n;
      mpq_class q(table(2) * (c * c - d * d + (d + nn) * (d + nn)), 16);
      q.canonicalize();
      inv.q_p = q;
    }
  } else if (inv.sum_half != 0) {
    throw InternalError("half-range symbol sum nonzero for p = 1 (mod 4), p=" + std::to_string(p));
  }
  return inv;
}

inline PrimeInvariants prime_invariants(std::uint64_t p) { return prime_invariants(LegendreTable(p)); }

}  // namespace legdet
