#pragma once

// Legendre-symbol matrices and the special vectors that go with them.
// Indices j, k run over 1..n (n = (p-1)/2) except for the Sun* kinds, which
// run over 0..n.

#include <cstdint>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "legdet/error.hpp"
#include "legdet/matrix.hpp"
#include "legdet/ntheory.hpp"

namespace legdet {

/// Parameters (x, y, z, w) of the shifted matrices.
struct Shift {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;
  std::int64_t w = 0;
};

namespace kind {
struct APlus {};   // ((j+k)/p) + ((j-k)/p)
struct AMinus {};  // ((j+k)/p) - ((j-k)/p)
struct AXYZW {     // x + A_+ + (j/p) y + (k/p) z + (jk/p) w
  Shift s;
};
struct AP {};  // ((j^2+jk)/p) + ((j^2-jk)/p)
struct SunHalfPlus {  // x + ((j+k)/p) + (j/p) y + (k/p) z + (jk/p) w, 0 <= j,k <= n
  Shift s;
};
struct SunHalfMinus {  // same with ((j-k)/p)
  Shift s;
};
}  // namespace kind

using MatrixKind =
    std::variant<kind::APlus, kind::AMinus, kind::AXYZW, kind::AP, kind::SunHalfPlus, kind::SunHalfMinus>;

namespace detail {

template <class Entry>
IntMatrix symbol_matrix(std::size_t first, std::size_t last, Entry&& entry) {
  const std::size_t size = last - first + 1;
  return IntMatrix::generate(size, size, [&](std::size_t r, std::size_t c) {
    return mpz_class(static_cast<long>(entry(static_cast<std::int64_t>(first + r), static_cast<std::int64_t>(first + c))));
  });
}

inline std::int64_t shifted_entry(const LegendreTable& L, const Shift& s, std::int64_t j, std::int64_t k) {
  return s.x + L(j) * s.y + L(k) * s.z + L(j * k) * s.w;
}

}  // namespace detail

inline IntMatrix build(const MatrixKind& which, const LegendreTable& L) {
  const std::size_t n = L.n();
  return std::visit(
      [&](const auto& k) -> IntMatrix {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kind::APlus>) {
          return detail::symbol_matrix(1, n, [&](std::int64_t j, std::int64_t c) { return L(j + c) + L(j - c); });
        } else if constexpr (std::is_same_v<K, kind::AMinus>) {
          return detail::symbol_matrix(1, n, [&](std::int64_t j, std::int64_t c) { return L(j + c) - L(j - c); });
        } else if constexpr (std::is_same_v<K, kind::AXYZW>) {
          return detail::symbol_matrix(1, n, [&](std::int64_t j, std::int64_t c) {
            return L(j + c) + L(j - c) + detail::shifted_entry(L, k.s, j, c);
          });
        } else if constexpr (std::is_same_v<K, kind::AP>) {
          return detail::symbol_matrix(1, n, [&](std::int64_t j, std::int64_t c) {
            return L(j * j + j * c) + L(j * j - j * c);
          });
        } else if constexpr (std::is_same_v<K, kind::SunHalfPlus>) {
          return detail::symbol_matrix(0, n, [&](std::int64_t j, std::int64_t c) {
            return L(j + c) + detail::shifted_entry(L, k.s, j, c);
          });
        } else {
          return detail::symbol_matrix(0, n, [&](std::int64_t j, std::int64_t c) {
            return L(j - c) + detail::shifted_entry(L, k.s, j, c);
          });
        }
      },
      which);
}

inline IntMatrix build(const MatrixKind& which, std::uint64_t p) { return build(which, LegendreTable(p)); }

/// u0 = (1, ..., 1) of length n.
inline IntVector ones(std::size_t n) { return IntVector(n, 1); }

/// ((first/p), ..., (last/p)).
inline IntVector symbols(const LegendreTable& L, std::size_t first, std::size_t last) {
  IntVector out;
  for (std::size_t j = first; j <= last; ++j) out.emplace_back(L(static_cast<std::int64_t>(j)));
  return out;
}

/// theta_i = sum_{k<=n} (((i+k)/p) - ((i-k)/p) - 2(k/p)) for p = 3 (mod 4).
inline IntVector theta_vector(const LegendreTable& L) {
  if (L.p() % 4 != 3) throw UsageError("theta vector needs p = 3 (mod 4)");
  const auto n = static_cast<std::int64_t>(L.n());
  IntVector theta;
  for (std::int64_t i = 1; i <= n; ++i) {
    std::int64_t acc = 0;
    for (std::int64_t k = 1; k <= n; ++k) acc += L(i + k) - L(i - k) - 2 * L(k);
    theta.emplace_back(static_cast<long>(acc));
  }
  return theta;
}

inline IntVector theta_vector(std::uint64_t p) { return theta_vector(LegendreTable(p)); }

struct EigvecPair {
  IntVector v1;  // ((j/p) - 1)_j, eigenvalue +1 of A_+
  IntVector v2;  // ((j/p) + 1)_j, eigenvalue -1 of A_+
};

inline EigvecPair special_eigvecs(const LegendreTable& L) {
  if (L.p() % 4 != 1) throw UsageError("special eigenvectors need p = 1 (mod 4)");
  EigvecPair out;
  for (std::size_t j = 1; j <= L.n(); ++j) {
    const int s = L(static_cast<std::int64_t>(j));
    out.v1.emplace_back(s - 1);
    out.v2.emplace_back(s + 1);
  }
  return out;
}

inline EigvecPair special_eigvecs(std::uint64_t p) { return special_eigvecs(LegendreTable(p)); }

}  // namespace legdet
