#include <gtest/gtest.h>

#include "legdet/charmat.hpp"
#include "legdet/exactla.hpp"
#include "oracles.hpp"

using namespace legdet;

namespace {

IntVector ints(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(Build, EntriesMatchDefinitions) {
  for (std::uint64_t p : {3, 5, 7, 11, 13, 29, 31}) {
    const auto n = static_cast<std::int64_t>((p - 1) / 2);
    const Shift s{2, -3, 5, 7};
    const IntMatrix ap = build(kind::APlus{}, p), am = build(kind::AMinus{}, p), apx = build(kind::AP{}, p);
    const IntMatrix axyzw = build(kind::AXYZW{s}, p);
    const IntMatrix shp = build(kind::SunHalfPlus{s}, p), shm = build(kind::SunHalfMinus{s}, p);
    ASSERT_EQ(ap.rows(), static_cast<std::size_t>(n));
    ASSERT_EQ(shp.rows(), static_cast<std::size_t>(n + 1));
    auto L = [p](std::int64_t a) { return oracle::legendre(a, p); };
    for (std::int64_t j = 1; j <= n; ++j) {
      for (std::int64_t k = 1; k <= n; ++k) {
        const auto r = static_cast<std::size_t>(j - 1), c = static_cast<std::size_t>(k - 1);
        EXPECT_EQ(ap(r, c), L(j + k) + L(j - k));
        EXPECT_EQ(am(r, c), L(j + k) - L(j - k));
        EXPECT_EQ(apx(r, c), L(j * j + j * k) + L(j * j - j * k));
        EXPECT_EQ(axyzw(r, c), L(j + k) + L(j - k) + s.x + L(j) * s.y + L(k) * s.z + L(j * k) * s.w);
      }
    }
    for (std::int64_t j = 0; j <= n; ++j) {
      for (std::int64_t k = 0; k <= n; ++k) {
        const auto r = static_cast<std::size_t>(j), c = static_cast<std::size_t>(k);
        const std::int64_t shift = s.x + L(j) * s.y + L(k) * s.z + L(j * k) * s.w;
        EXPECT_EQ(shp(r, c), L(j + k) + shift);
        EXPECT_EQ(shm(r, c), L(j - k) + shift);
      }
    }
  }
}

TEST(Build, SymmetryByResidueClass) {
  for (std::uint64_t p : {5, 13, 17, 29}) {
    EXPECT_EQ(build(kind::APlus{}, p).transpose(), build(kind::APlus{}, p));
    EXPECT_EQ(build(kind::AMinus{}, p).transpose(), build(kind::AMinus{}, p));
  }
  for (std::uint64_t p : {7, 11, 19, 23}) EXPECT_EQ(build(kind::APlus{}, p).transpose(), build(kind::AMinus{}, p));
}

TEST(Build, SmallDeterminants) {
  EXPECT_EQ(det(build(kind::APlus{}, 5)), -1);
  EXPECT_EQ(det(build(kind::AMinus{}, 5)), -5);
  EXPECT_EQ(det(build(kind::APlus{}, 7)), 7);
  EXPECT_EQ(det(build(kind::AMinus{}, 7)), 7);
  EXPECT_EQ(det(build(kind::APlus{}, 11)), 121);
  EXPECT_EQ(det(build(kind::AMinus{}, 11)), 121);
  EXPECT_EQ(det(build(kind::APlus{}, 13)), -169);
  EXPECT_EQ(det(build(kind::AMinus{}, 13)), -2197);
}

TEST(Vectors, OnesAndSymbols) {
  EXPECT_EQ(ones(3), ints({1, 1, 1}));
  const LegendreTable t(7);
  EXPECT_EQ(symbols(t, 1, 3), ints({1, 1, -1}));
  EXPECT_EQ(symbols(t, 0, 3), ints({0, 1, 1, -1}));
}

TEST(Theta, KnownValuesAndEigenRelation) {
  EXPECT_EQ(theta_vector(7), ints({1, -3, -5}));
  EXPECT_EQ(theta_vector(11), ints({-3, -5, -7, -7, -11}));
  for (std::uint64_t p : {7, 11, 19, 23, 31, 43}) {
    const IntVector got = build(kind::APlus{}, p) * theta_vector(p);
    EXPECT_EQ(got, IntVector((p - 1) / 2, static_cast<long>(p))) << p;
  }
  EXPECT_THROW(theta_vector(13), UsageError);
}

TEST(SpecialEigvecs, EigenvaluesPlusMinusOne) {
  for (std::uint64_t p : {5, 13, 17, 29, 37, 41}) {
    const EigvecPair v = special_eigvecs(p);
    const IntMatrix a = build(kind::APlus{}, p);
    EXPECT_EQ(a * v.v1, v.v1) << p;
    IntVector neg = v.v2;
    for (auto& x : neg) x = -x;
    EXPECT_EQ(a * v.v2, neg) << p;
  }
  EXPECT_THROW(special_eigvecs(7), UsageError);
}

TEST(Build, RejectsNonPrimes) {
  EXPECT_THROW(build(kind::APlus{}, 9), UsageError);
  EXPECT_THROW(build(kind::APlus{}, 2), UsageError);
}
