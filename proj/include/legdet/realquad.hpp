#pragma once

// The real quadratic field Q(sqrt p) for a prime p = 1 (mod 4): fundamental
// unit, class number, and the coefficients of eps_p^{h_p} and
// eps_p^{(2-(2/p))h_p}.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "legdet/error.hpp"
#include "legdet/ntheory.hpp"

namespace legdet {

namespace detail {

inline void require_prime_1mod4(std::uint64_t p) {
  require_odd_prime(p);
  if (p % 4 != 1) throw UsageError("needs a prime p = 1 (mod 4), got " + std::to_string(p));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::uint64_t isqrt(std::uint64_t v) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), mpz_class(static_cast<unsigned long>(v)).get_mpz_t());
  return r.get_ui();
}

}  // namespace detail

/// a + b sqrt(p) in Z[(1+sqrt p)/2], stored as the integer pair (2a, 2b).
class QuadElem {
 public:
  QuadElem(std::uint64_t p, mpz_class twice_a, mpz_class twice_b)
      : p_(p), ta_(std::move(twice_a)), tb_(std::move(twice_b)) {
    if (p_ % 4 != 1) throw UsageError("QuadElem needs p = 1 (mod 4)");
    if (mpz_odd_p(ta_.get_mpz_t()) != mpz_odd_p(tb_.get_mpz_t())) {
      throw UsageError("QuadElem: a and b must both be integers or both be halves");
    }
  }

  static QuadElem one(std::uint64_t p) { return QuadElem(p, 2, 0); }

  std::uint64_t p() const { return p_; }
  const mpz_class& twice_a() const { return ta_; }
  const mpz_class& twice_b() const { return tb_; }

  mpq_class a() const {
    mpq_class r(ta_, 2);
    r.canonicalize();
    return r;
  }
  mpq_class b() const {
    mpq_class r(tb_, 2);
    r.canonicalize();
    return r;
  }

  mpz_class norm() const {
    mpz_class v = ta_ * ta_ - mpz_class(static_cast<unsigned long>(p_)) * tb_ * tb_;
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), 4);
    return v;
  }

  QuadElem operator*(const QuadElem& o) const {
    if (o.p_ != p_) throw UsageError("QuadElem: mixed fields");
    mpz_class ra = ta_ * o.ta_ + mpz_class(static_cast<unsigned long>(p_)) * tb_ * o.tb_;
    mpz_class rb = ta_ * o.tb_ + tb_ * o.ta_;
    mpz_divexact_ui(ra.get_mpz_t(), ra.get_mpz_t(), 2);
    mpz_divexact_ui(rb.get_mpz_t(), rb.get_mpz_t(), 2);
    return QuadElem(p_, std::move(ra), std::move(rb));
  }

  friend bool operator==(const QuadElem& x, const QuadElem& y) {
    return x.p_ == y.p_ && x.ta_ == y.ta_ && x.tb_ == y.tb_;
  }

  /// "(1+1√5)/2" for half-integral elements, "4+1√17" otherwise.
  std::string to_string() const {
    const bool half = mpz_odd_p(ta_.get_mpz_t()) != 0;
    mpz_class a = half ? ta_ : ta_ / 2;
    mpz_class b = half ? tb_ : tb_ / 2;
    std::string s = a.get_str() + (b < 0 ? "-" : "+") + mpz_class(abs(b)).get_str() + "√" +
                    std::to_string(p_);
    return half ? "(" + s + ")/2" : s;
  }

 private:
  std::uint64_t p_;
  mpz_class ta_;
  mpz_class tb_;
};

inline QuadElem pow(QuadElem base, std::uint64_t exp) {
  QuadElem result = QuadElem::one(base.p());
  while (exp != 0) {
    if (exp & 1) result = result * base;
    base = base * base;
    exp >>= 1;
  }
  return result;
}

/// Fundamental unit of Q(sqrt p), p prime = 1 (mod 4). Runs the PQa
/// continued-fraction recurrence on (1 + sqrt p)/2; the first return of Q to
/// 2 ends the period and yields the minimal solution of x^2 - p y^2 = +-4.
inline QuadElem fundamental_unit(std::uint64_t p) {
  detail::require_prime_1mod4(p);
  const auto D = static_cast<std::int64_t>(p);
  const auto s = static_cast<std::int64_t>(detail::isqrt(p));
  std::int64_t P = 1, Q = 2;
  mpz_class a_prev2 = 0, a_prev1 = 1;  // A_{i-2}, A_{i-1}
  mpz_class b_prev2 = 1, b_prev1 = 0;  // B_{i-2}, B_{i-1}
  for (std::uint64_t i = 0; i <= 4 * p + 8; ++i) {
    const std::int64_t q = Q > 0 ? detail::floor_div(P + s, Q) : -(detail::floor_div(P + s, -Q) + 1);
    mpz_class A = q * a_prev1 + a_prev2;
    mpz_class B = q * b_prev1 + b_prev2;
    const std::int64_t next_p = q * Q - P;
    const std::int64_t next_q = (D - next_p * next_p) / Q;
    if (next_q == 2) {
      mpz_class G = 2 * A - B;
      QuadElem eps(p, G, B);
      if (eps.norm() != -1) throw InternalError("fundamental unit of norm +1 at p=" + std::to_string(p));
      return eps;
    }
    a_prev2 = std::move(a_prev1);
    a_prev1 = std::move(A);
    b_prev2 = std::move(b_prev1);
    b_prev1 = std::move(B);
    P = next_p;
    Q = next_q;
  }
  throw InternalError("continued fraction period not found at p=" + std::to_string(p));
}

/// Indefinite form A x^2 + B xy + C y^2.
struct QuadForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }
  friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

/// 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b, D not a square.
inline bool is_reduced(const QuadForm& f) {
  const std::int64_t D = f.discriminant();
  if (D <= 0 || f.b <= 0 || f.b * f.b >= D) return false;
  const std::int64_t twice_a = 2 * std::abs(f.a);
  if (twice_a == 0) return false;
  const bool lower = (twice_a + f.b) * (twice_a + f.b) > D;
  const bool upper = twice_a - f.b <= 0 || (twice_a - f.b) * (twice_a - f.b) < D;
  return lower && upper;
}

/// Reduction operator: (a, b, c) -> (c, r, (r^2 - D)/4c) with r = -b
/// (mod 2|c|) and sqrt D - 2|c| < r < sqrt D.
inline QuadForm rho(const QuadForm& f) {
  const std::int64_t D = f.discriminant();
  const auto s = static_cast<std::int64_t>(detail::isqrt(static_cast<std::uint64_t>(D)));
  const std::int64_t m = 2 * std::abs(f.c);
  const std::int64_t r = s - (((s + f.b) % m) + m) % m;
  return QuadForm{f.c, r, (r * r - D) / (4 * f.c)};
}

/// Every reduced form of discriminant p.
inline std::vector<QuadForm> reduced_forms(std::uint64_t p) {
  detail::require_prime_1mod4(p);
  const auto D = static_cast<std::int64_t>(p);
  std::vector<QuadForm> out;
  for (std::int64_t b = 1; b * b < D; b += 2) {
    const std::int64_t ac = (b * b - D) / 4;  // negative
    for (std::int64_t a = 1; a * a <= -ac; ++a) {
      if (ac % a != 0) continue;
      for (std::int64_t first : {a, -ac / a}) {
        for (std::int64_t sign : {1, -1}) {
          QuadForm f{sign * first, b, ac / (sign * first)};
          if (is_reduced(f) && std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        }
      }
    }
  }
  return out;
}

/// h_p as the number of rho-cycles among reduced forms of discriminant p.
/// The fundamental unit has norm -1, so the narrow and wide counts agree.
inline std::uint64_t class_number_real(std::uint64_t p) {
  const std::vector<QuadForm> forms = reduced_forms(p);
  auto key = [](const QuadForm& f) { return std::to_string(f.a) + "," + std::to_string(f.b); };
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < forms.size(); ++i) index.emplace(key(forms[i]), i);

  std::vector<bool> seen(forms.size(), false);
  std::uint64_t cycles = 0;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    QuadForm f = forms[i];
    for (std::size_t steps = 0; !seen[index.at(key(f))]; ++steps) {
      if (steps > forms.size()) throw InternalError("rho did not close a cycle");
      seen[index.at(key(f))] = true;
      f = rho(f);
      if (!is_reduced(f)) throw InternalError("rho left the reduced forms at p=" + std::to_string(p));
    }
    if (!(f == forms[i])) throw InternalError("rho cycles overlap at p=" + std::to_string(p));
  }
  return cycles;
}

struct UnitCoeffs {
  std::uint64_t h = 0;            // h_p
  std::uint64_t prime_power = 0;  // (2 - (2/p)) h_p
  mpq_class a, b;                 // eps^{h_p} = a + b sqrt p
  mpq_class a_prime, b_prime;     // eps^{(2-(2/p))h_p}
};

inline UnitCoeffs unit_power_coeffs(std::uint64_t p) {
  const QuadElem eps = fundamental_unit(p);
  UnitCoeffs out;
  out.h = class_number_real(p);
  out.prime_power = static_cast<std::uint64_t>(2 - legendre(2, p)) * out.h;
  const QuadElem e1 = pow(eps, out.h);
  const QuadElem e2 = pow(eps, out.prime_power);
  const mpz_class expected_norm = out.h % 2 == 0 ? 1 : -1;
  if (e1.norm() != expected_norm) throw InternalError("eps^h has the wrong norm at p=" + std::to_string(p));
  out.a = e1.a();
  out.b = e1.b();
  out.a_prime = e2.a();
  out.b_prime = e2.b();
  return out;
}

}  // namespace legdet
