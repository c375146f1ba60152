#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace legdet {

/// Univariate integer polynomial, coefficients indexed by degree. The
/// highest stored coefficient is nonzero; the zero polynomial stores nothing.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

  static IntPoly constant(mpz_class v) { return IntPoly({std::move(v)}); }
  static IntPoly x() { return IntPoly({0, 1}); }
  /// x^k - v
  static IntPoly binomial(std::size_t k, const mpz_class& v) {
    std::vector<mpz_class> c(k + 1);
    c[0] = -v;
    c[k] += 1;
    return IntPoly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(std::size_t k) const { return k < c_.size() ? c_[k] : mpz_class(0); }

  mpz_class operator()(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return IntPoly(std::move(c));
  }

  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return IntPoly(std::move(c));
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(c));
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  /// Human-readable form, highest degree first: "x^2 - 5".
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const mpz_class& v = c_[static_cast<std::size_t>(k)];
      if (v == 0) continue;
      const bool neg = v < 0;
      mpz_class mag = abs(v);
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      if (mag != 1 || k == 0) out += mag.get_str();
      if (k >= 1) out += "x";
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<mpz_class> c_;
};

inline IntPoly pow(IntPoly base, std::uint64_t exp) {
  IntPoly result = IntPoly::constant(1);
  while (exp != 0) {
    if (exp & 1) result = result * base;
    exp >>= 1;
    if (exp != 0) base = base * base;
  }
  return result;
}

}  // namespace legdet
