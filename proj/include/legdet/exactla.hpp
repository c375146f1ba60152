#pragma once

// Exact dense linear algebra over Z: determinants (Bareiss and
// multi-modular), characteristic polynomials via Hessenberg reduction modulo
// word-sized primes, adjugate bilinear forms, the matrix-determinant lemma,
// and the four-parameter expansion |A + x u0 u0^T + y f u0^T + z u0 g^T +
// w f g^T|.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "legdet/crt.hpp"
#include "legdet/error.hpp"
#include "legdet/matrix.hpp"
#include "legdet/modular.hpp"
#include "legdet/poly.hpp"

namespace legdet {

namespace detail {

using mod::u64;

inline void require_square(const IntMatrix& m, const char* what) {
  if (!m.square()) throw UsageError(std::string(what) + ": matrix is not square");
}

inline std::vector<u64> reduce(const IntMatrix& m, u64 q) {
  std::vector<u64> out;
  out.reserve(m.rows() * m.cols());
  for (const auto& v : m.data()) out.push_back(mod::from_mpz(v, q));
  return out;
}

inline u64 det_mod(std::vector<u64> a, std::size_t n, u64 q) {
  u64 det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv * n + k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      det = q - det;
      if (det == q) det = 0;
    }
    const u64 pivot = a[k * n + k];
    det = mod::mul(det, pivot, q);
    const u64 pinv = mod::inv(pivot, q);
    for (std::size_t i = k + 1; i < n; ++i) {
      const u64 f = mod::mul(a[i * n + k], pinv, q);
      if (f == 0) continue;
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i * n + j] = mod::sub(a[i * n + j], mod::mul(f, a[k * n + j], q), q);
      }
    }
  }
  return det;
}

// Characteristic polynomial det(xI - A) mod q, ascending coefficients.
inline std::vector<u64> charpoly_mod(std::vector<u64> h, std::size_t n, u64 q) {
  auto at = [&](std::size_t i, std::size_t j) -> u64& { return h[i * n + j]; };

  // Similarity reduction to upper Hessenberg form.
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && at(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(i, j), at(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(at(j, i), at(j, m));
    }
    const u64 tinv = mod::inv(at(m, m - 1), q);
    for (std::size_t j = m + 1; j < n; ++j) {
      if (at(j, m - 1) == 0) continue;
      const u64 u = mod::mul(at(j, m - 1), tinv, q);
      for (std::size_t k = 0; k < n; ++k) at(j, k) = mod::sub(at(j, k), mod::mul(u, at(m, k), q), q);
      for (std::size_t k = 0; k < n; ++k) at(k, m) = mod::add(at(k, m), mod::mul(u, at(k, j), q), q);
    }
  }

  // p_m = (x - h_mm) p_{m-1} - sum_i (prod of subdiagonal) h_{m-i,m} p_{m-i-1}
  std::vector<std::vector<u64>> p(n + 1);
  p[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<u64> cur(m + 1, 0);
    const u64 diag = at(m - 1, m - 1);
    for (std::size_t k = 0; k < m; ++k) {
      cur[k + 1] = mod::add(cur[k + 1], p[m - 1][k], q);
      cur[k] = mod::sub(cur[k], mod::mul(diag, p[m - 1][k], q), q);
    }
    u64 t = 1;
    for (std::size_t i = 1; i < m; ++i) {
      t = mod::mul(t, at(m - i, m - i - 1), q);
      if (t == 0) break;
      const u64 f = mod::mul(t, at(m - i - 1, m - 1), q);
      for (std::size_t k = 0; k < p[m - i - 1].size(); ++k) {
        cur[k] = mod::sub(cur[k], mod::mul(f, p[m - i - 1][k], q), q);
      }
    }
    p[m] = std::move(cur);
  }
  return std::move(p[n]);
}

// Solves A y = u mod q. Returns det(A) mod q and y (empty when singular).
inline std::pair<u64, std::vector<u64>> solve_mod(std::vector<u64> a, std::vector<u64> u, std::size_t n, u64 q) {
  u64 det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv * n + k] == 0) ++piv;
    if (piv == n) return {0, {}};
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(u[k], u[piv]);
      det = det == 0 ? 0 : q - det;
    }
    const u64 pivot = a[k * n + k];
    det = mod::mul(det, pivot, q);
    const u64 pinv = mod::inv(pivot, q);
    for (std::size_t i = k + 1; i < n; ++i) {
      const u64 f = mod::mul(a[i * n + k], pinv, q);
      if (f == 0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] = mod::sub(a[i * n + j], mod::mul(f, a[k * n + j], q), q);
      u[i] = mod::sub(u[i], mod::mul(f, u[k], q), q);
    }
  }
  std::vector<u64> y(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    u64 acc = u[k];
    for (std::size_t j = k + 1; j < n; ++j) acc = mod::sub(acc, mod::mul(a[k * n + j], y[j], q), q);
    y[k] = mod::mul(acc, mod::inv(a[k * n + k], q), q);
  }
  return {det, std::move(y)};
}

inline std::vector<mpz_class> row_norms_sq(const IntMatrix& m) {
  std::vector<mpz_class> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& v : m.row(i)) out[i] += v * v;
  return out;
}

inline IntMatrix minor_of(const IntMatrix& m, std::size_t skip_row, std::size_t skip_col) {
  IntMatrix out(m.rows() - 1, m.cols() - 1);
  for (std::size_t i = 0, oi = 0; i < m.rows(); ++i) {
    if (i == skip_row) continue;
    for (std::size_t j = 0, oj = 0; j < m.cols(); ++j) {
      if (j == skip_col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace detail

/// Fraction-free Gaussian elimination; every division is exact.
inline mpz_class det_bareiss(IntMatrix m) {
  detail::require_square(m, "det");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Determinants modulo enough word-sized primes to exceed twice the Hadamard
/// bound, reconstructed into the symmetric range.
inline mpz_class det_modular(const IntMatrix& m) {
  detail::require_square(m, "det");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  mpz_class bound_sq = 1;
  for (const auto& r : detail::row_norms_sq(m)) {
    if (r == 0) return 0;
    bound_sq *= r;
  }
  crt::Accumulator acc;
  for (std::size_t i = 0; !acc.covers(bound_sq); ++i) {
    const std::uint64_t q = crt::modulus(i);
    acc.add(detail::det_mod(detail::reduce(m, q), n, q), q);
  }
  return acc.symmetric();
}

inline constexpr std::size_t kBareissMaxOrder = 8;

inline mpz_class det(const IntMatrix& m) {
  detail::require_square(m, "det");
  return m.rows() <= kBareissMaxOrder ? det_bareiss(m) : det_modular(m);
}

/// Rational Gaussian elimination.
inline mpq_class det(RatMatrix m) {
  if (!m.square()) throw UsageError("det: matrix is not square");
  const std::size_t n = m.rows();
  mpq_class result = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      result = -result;
    }
    result *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      const mpq_class f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return result;
}

inline mpz_class trace(const IntMatrix& m) {
  detail::require_square(m, "trace");
  mpz_class t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// det(xI - M), exact. Hessenberg reduction modulo each prime; the k-th
/// coefficient is bounded by binom(n,k) n^{k/2} max|m_ij|^k.
inline IntPoly charpoly(const IntMatrix& m) {
  detail::require_square(m, "charpoly");
  const std::size_t n = m.rows();
  mpz_class max_entry = 0;
  for (const auto& v : m.data()) max_entry = std::max(max_entry, mpz_class(abs(v)));
  if (max_entry == 0) return IntPoly::binomial(n, 0);

  mpz_class bound_sq = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    mpz_class nk, mk;
    mpz_ui_pow_ui(nk.get_mpz_t(), n, k);
    mpz_pow_ui(mk.get_mpz_t(), max_entry.get_mpz_t(), 2 * k);
    bound_sq = std::max(bound_sq, mpz_class(binom * binom * nk * mk));
  }

  std::vector<crt::Accumulator> acc(n + 1);
  for (std::size_t i = 0; !acc[0].covers(bound_sq); ++i) {
    const std::uint64_t q = crt::modulus(i);
    const std::vector<std::uint64_t> cp = detail::charpoly_mod(detail::reduce(m, q), n, q);
    for (std::size_t k = 0; k <= n; ++k) acc[k].add(cp[k], q);
  }
  std::vector<mpz_class> coeffs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) coeffs[k] = acc[k].symmetric();
  IntPoly f(std::move(coeffs));

  const mpz_class signed_det = n % 2 == 0 ? det(m) : mpz_class(-det(m));
  if (f.degree() != static_cast<int>(n) || f.coeff(n) != 1 || f.coeff(0) != signed_det ||
      (n > 0 && f.coeff(n - 1) != -trace(m))) {
    throw InternalError("charpoly disagrees with det/trace");
  }
  return f;
}

inline IntMatrix adjugate(const IntMatrix& m) {
  detail::require_square(m, "adjugate");
  const std::size_t n = m.rows();
  if (n == 1) return IntMatrix(1, 1, 1);
  IntMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class c = det(detail::minor_of(m, j, i));
      adj(i, j) = (i + j) % 2 == 0 ? c : mpz_class(-c);
    }
  }
  return adj;
}

/// v^T adj(A) u. For nonsingular A this solves A y = u modulo each prime
/// (adj(A) u = det(A) y); a singular A falls back to
/// det(A + u v^T) - det(A).
inline mpz_class bilinear_adjugate(const IntMatrix& a, const IntVector& v, const IntVector& u) {
  detail::require_square(a, "bilinear_adjugate");
  const std::size_t n = a.rows();
  if (v.size() != n || u.size() != n) throw UsageError("bilinear_adjugate: vector size mismatch");
  const mpz_class alpha = det(a);
  if (alpha == 0) {
    IntMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) shifted(i, j) += u[i] * v[j];
    return det(shifted) - alpha;
  }

  mpz_class l1v = 0, l1u = 0;
  for (const auto& x : v) l1v += abs(x);
  for (const auto& x : u) l1u += abs(x);
  mpz_class bound_sq = l1v * l1v * l1u * l1u;
  for (const auto& r : detail::row_norms_sq(a)) bound_sq *= std::max(r, mpz_class(1));

  crt::Accumulator acc;
  for (std::size_t i = 0; !acc.covers(bound_sq); ++i) {
    const std::uint64_t q = crt::modulus(i);
    std::vector<std::uint64_t> ur(n);
    for (std::size_t k = 0; k < n; ++k) ur[k] = mod::from_mpz(u[k], q);
    auto [dq, y] = detail::solve_mod(detail::reduce(a, q), std::move(ur), n, q);
    if (y.empty()) continue;  // q divides det(A)
    std::uint64_t dot = 0;
    for (std::size_t k = 0; k < n; ++k) dot = mod::add(dot, mod::mul(mod::from_mpz(v[k], q), y[k], q), q);
    acc.add(mod::mul(dq, dot, q), q);
  }
  return acc.symmetric();
}

/// Evaluates both sides of |A + U V^T| = |I_m + V^T A^{-1} U| |A| exactly,
/// with A^{-1} = adj(A)/|A| over Q.
inline bool mdl_check(const IntMatrix& a, const IntMatrix& u, const IntMatrix& v) {
  detail::require_square(a, "mdl_check");
  if (u.rows() != a.rows() || v.rows() != a.rows() || u.cols() != v.cols()) {
    throw UsageError("mdl_check: U and V must both be n x m");
  }
  const mpz_class alpha = det(a);
  if (alpha == 0) throw UsageError("mdl_check: A is singular");

  const mpz_class lhs = det(a + u * v.transpose());

  RatMatrix inverse = to_rational(adjugate(a));
  inverse = mpq_class(1, 1) / mpq_class(alpha) * inverse;
  const RatMatrix inner = RatMatrix::identity(u.cols()) + to_rational(v.transpose()) * inverse * to_rational(u);
  const mpq_class rhs = det(inner) * mpq_class(alpha);
  return rhs == mpq_class(lhs);
}

/// Closed form of |A(x,y,z,w)| from the five base determinants.
struct ParamDet {
  mpz_class alpha;   // |A(0,0,0,0)|
  mpz_class alpha1;  // |A(1,0,0,0)|
  mpz_class alpha2;  // |A(0,1,0,0)|
  mpz_class alpha3;  // |A(0,0,1,0)|
  mpz_class alpha4;  // |A(0,0,0,1)|
  mpq_class cross;   // coefficient of (yz - wx)

  mpq_class evaluate(const mpq_class& x, const mpq_class& y, const mpq_class& z, const mpq_class& w) const {
    return mpq_class(alpha) * (1 - x - y - z - w) + alpha1 * x + alpha2 * y + alpha3 * z + alpha4 * w +
           cross * (y * z - w * x);
  }
};

/// A(x,y,z,w) = [a_jk + x + f_j y + g_k z + f_j g_k w].
inline IntMatrix param_shift(const IntMatrix& a, const IntVector& f, const IntVector& g, const mpz_class& x,
                             const mpz_class& y, const mpz_class& z, const mpz_class& w) {
  detail::require_square(a, "param_shift");
  if (f.size() != a.rows() || g.size() != a.rows()) throw UsageError("param_shift: f, g must have length n");
  IntMatrix out = a;
  for (std::size_t j = 0; j < a.rows(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) out(j, k) += x + f[j] * y + g[k] * z + f[j] * g[k] * w;
  return out;
}

/// The base determinants alpha, alpha_1..alpha_4 by direct evaluation, and
/// the (yz - wx) coefficient a1 - a2 - a3 + a4 + (a2 a3 - a1 a4)/alpha.
inline ParamDet param_det_expand(const IntMatrix& a, const IntVector& f, const IntVector& g) {
  detail::require_square(a, "param_det_expand");
  ParamDet pd;
  pd.alpha = det(a);
  if (pd.alpha == 0) throw UsageError("param_det_expand: |A| must be nonzero");
  pd.alpha1 = det(param_shift(a, f, g, 1, 0, 0, 0));
  pd.alpha2 = det(param_shift(a, f, g, 0, 1, 0, 0));
  pd.alpha3 = det(param_shift(a, f, g, 0, 0, 1, 0));
  pd.alpha4 = det(param_shift(a, f, g, 0, 0, 0, 1));
  // gmp arithmetic needs canonical operands (positive denominator)
  mpq_class ratio(mpz_class(pd.alpha2 * pd.alpha3 - pd.alpha1 * pd.alpha4), pd.alpha);
  ratio.canonicalize();
  pd.cross = mpq_class(pd.alpha1 - pd.alpha2 - pd.alpha3 + pd.alpha4) + ratio;
  return pd;
}

}  // namespace legdet
