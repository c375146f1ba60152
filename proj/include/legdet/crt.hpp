#pragma once

// Word-sized prime moduli and Chinese-remainder reconstruction into the
// symmetric range (-M/2, M/2].

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "legdet/error.hpp"
#include "legdet/modular.hpp"
#include "legdet/ntheory.hpp"

namespace legdet::crt {

inline constexpr unsigned kDefaultModulusBits = 62;
inline constexpr std::size_t kMaxModuli = 1u << 16;

/// Bit size of the moduli. LEGDET_MODULI_BITS overrides it (clamped to
/// [20, 62]); only useful for exercising the reconstruction with many
/// small primes.
inline unsigned modulus_bits() {
  static const unsigned bits = [] {
    const char* env = std::getenv("LEGDET_MODULI_BITS");
    if (env == nullptr || *env == '\0') return kDefaultModulusBits;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0') return kDefaultModulusBits;
    return static_cast<unsigned>(std::clamp(v, 20L, static_cast<long>(kDefaultModulusBits)));
  }();
  return bits;
}

/// The i-th prime in descending order below 2^bits.
inline std::uint64_t modulus(std::size_t i) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes;
  std::lock_guard lock(mu);
  if (i >= kMaxModuli) throw InternalError("CRT modulus set exhausted");
  std::uint64_t cand = primes.empty() ? (std::uint64_t{1} << modulus_bits()) - 1 : primes.back() - 2;
  while (primes.size() <= i) {
    if (is_prime(cand)) primes.push_back(cand);
    cand -= 2;
  }
  return primes[i];
}

/// Incremental Garner reconstruction.
class Accumulator {
 public:
  void add(std::uint64_t residue, std::uint64_t m) {
    const std::uint64_t current = mod::from_mpz(value_, m);
    const std::uint64_t scale = mod::inv(mod::from_mpz(modulus_, m), m);
    const std::uint64_t t = mod::mul(mod::sub(residue % m, current, m), scale, m);
    value_ += modulus_ * mpz_class(static_cast<unsigned long>(t));
    modulus_ *= mpz_class(static_cast<unsigned long>(m));
  }

  const mpz_class& modulus() const { return modulus_; }

  /// True once the modulus exceeds twice the bound whose square is given.
  bool covers(const mpz_class& bound_sq) const { return modulus_ * modulus_ > 4 * bound_sq; }

  mpz_class symmetric() const {
    mpz_class v = value_;
    if (2 * v > modulus_) v -= modulus_;
    return v;
  }

 private:
  mpz_class value_ = 0;
  mpz_class modulus_ = 1;
};

}  // namespace legdet::crt
