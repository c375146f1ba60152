#include <gtest/gtest.h>

#include <random>

#include "legdet/crt.hpp"
#include "legdet/exactla.hpp"
#include "legdet/poly.hpp"
#include "oracles.hpp"

using namespace legdet;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  return IntMatrix::generate(rows, cols, [&](std::size_t, std::size_t) { return mpz_class(dist(rng)); });
}

IntVector random_vector(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  IntVector v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

mpz_class dot(const IntVector& a, const IntVector& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST(Crt, ReconstructsSignedValues) {
  for (const char* s : {"0", "1", "-1", "123456789012345678901234567890", "-98765432109876543210987654321"}) {
    const mpz_class v(s);
    crt::Accumulator acc;
    for (std::size_t i = 0; !acc.covers(v * v + 1); ++i) acc.add(mod::from_mpz(v, crt::modulus(i)), crt::modulus(i));
    EXPECT_EQ(acc.symmetric(), v) << s;
  }
}

TEST(Crt, ModuliAreDistinctDescendingPrimes) {
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_TRUE(is_prime(crt::modulus(i)));
    EXPECT_LT(crt::modulus(i), std::uint64_t{1} << crt::modulus_bits());
    if (i > 0) {
      EXPECT_LT(crt::modulus(i), crt::modulus(i - 1));
    }
  }
}

TEST(Det, SmallCases) {
  EXPECT_EQ(det(IntMatrix(0, 0)), 1);
  EXPECT_EQ(det(IntMatrix(1, 1, -7)), -7);
  IntMatrix m(2, 2);
  m(0, 0) = 1, m(0, 1) = 2, m(1, 0) = 3, m(1, 1) = 4;
  EXPECT_EQ(det(m), -2);
  EXPECT_EQ(det(IntMatrix(5, 5, 3)), 0);
  EXPECT_THROW(det(IntMatrix(2, 3)), UsageError);
}

TEST(Det, MatchesCofactorExpansion) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 7;
    const IntMatrix m = random_matrix(rng, n, n, -20, 20);
    const mpz_class want = oracle::det_laplace(m);
    ASSERT_EQ(det(m), want);
    ASSERT_EQ(det_bareiss(m), want);
    ASSERT_EQ(det_modular(m), want);
  }
}

TEST(Det, BareissAndModularAgreeOnRandomInstances) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 14;
    const long r = t % 3 == 0 ? 1 : (t % 3 == 1 ? 50 : 1000000000);
    const IntMatrix m = random_matrix(rng, n, n, -r, r);
    ASSERT_EQ(det_bareiss(m), det_modular(m)) << "instance " << t;
  }
}

TEST(Det, LargeMatricesMatchRationalElimination) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {20, 35, 50}) {
    IntMatrix m = random_matrix(rng, n, n, -3, 3);
    EXPECT_EQ(det(m), oracle::det_gauss(m)) << n;
    // force a singular one: duplicate a row
    for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = m(0, j);
    EXPECT_EQ(det(m), 0) << n;
  }
}

TEST(Det, RationalMatrices) {
  RatMatrix m(2, 2);
  m(0, 0) = mpq_class(1, 2), m(0, 1) = mpq_class(1, 3), m(1, 0) = mpq_class(1, 4), m(1, 1) = mpq_class(1, 5);
  EXPECT_EQ(det(m), mpq_class(1, 10) - mpq_class(1, 12));
}

TEST(Charpoly, AgreesWithDeterminantAtIntegerPoints) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + t % 9;
    const IntMatrix m = random_matrix(rng, n, n, -9, 9);
    const IntPoly f = charpoly(m);
    ASSERT_EQ(f.degree(), static_cast<int>(n));
    for (long x = -3; x <= 3; ++x) {
      const IntMatrix shifted = mpz_class(x) * IntMatrix::identity(n) - m;
      ASSERT_EQ(f(x), oracle::det_gauss(shifted)) << "x=" << x;
    }
  }
}

TEST(Charpoly, KnownPolynomial) {
  IntMatrix m(2, 2);
  m(0, 0) = 0, m(0, 1) = 1, m(1, 0) = 5, m(1, 1) = 0;
  EXPECT_EQ(charpoly(m), IntPoly::binomial(2, 5));
  EXPECT_EQ(charpoly(IntMatrix(3, 3)), IntPoly::binomial(3, 0));
}

TEST(Charpoly, CayleyHamilton) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 6;
    const IntMatrix m = random_matrix(rng, n, n, -5, 5);
    const IntPoly f = charpoly(m);
    IntMatrix acc(n, n), power = IntMatrix::identity(n);
    for (std::size_t k = 0; k <= n; ++k) {
      acc += f.coeff(k) * power;
      power = power * m;
    }
    EXPECT_EQ(acc, IntMatrix(n, n));
  }
}

TEST(Adjugate, ProductIsDeterminantTimesIdentity) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 6;
    const IntMatrix m = random_matrix(rng, n, n, -6, 6);
    EXPECT_EQ(m * adjugate(m), det(m) * IntMatrix::identity(n));
  }
}

TEST(BilinearAdjugate, MatchesExplicitAdjugateIncludingSingular) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 7;
    IntMatrix m = random_matrix(rng, n, n, t % 2 ? -1 : -8, t % 2 ? 1 : 8);
    if (t % 5 == 0 && n > 1)
      for (std::size_t j = 0; j < n; ++j) m(1, j) = m(0, j);
    const IntVector v = random_vector(rng, n, -9, 9), u = random_vector(rng, n, -9, 9);
    ASSERT_EQ(bilinear_adjugate(m, v, u), dot(v, adjugate(m) * u)) << "instance " << t;
  }
}

TEST(Mdl, HoldsOnRandomInstancesAndRejectsSingular) {
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 1 + checked % 6, m = 1 + checked % 4;
    const IntMatrix a = random_matrix(rng, n, n, -9, 9);
    if (det(a) == 0) continue;
    ASSERT_TRUE(mdl_check(a, random_matrix(rng, n, m, -9, 9), random_matrix(rng, n, m, -9, 9)));
    ++checked;
  }
  EXPECT_THROW(mdl_check(IntMatrix(2, 2), IntMatrix(2, 1), IntMatrix(2, 1)), UsageError);
}

TEST(ParamDet, ClosedFormMatchesDirectDeterminants) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> small(-9, 9);
  int checked = 0;
  while (checked < 100) {
    const std::size_t n = 1 + checked % 6;
    const IntMatrix a = random_matrix(rng, n, n, -9, 9);
    if (det(a) == 0) continue;
    const IntVector f = random_vector(rng, n, -3, 3), g = random_vector(rng, n, -3, 3);
    const ParamDet pd = param_det_expand(a, f, g);
    for (int s = 0; s < 10; ++s) {
      const long x = small(rng), y = small(rng), z = small(rng), w = small(rng);
      ASSERT_EQ(mpq_class(oracle::det_gauss(param_shift(a, f, g, x, y, z, w))), pd.evaluate(x, y, z, w));
    }
    ++checked;
  }
  EXPECT_THROW(param_det_expand(IntMatrix(2, 2), IntVector(2), IntVector(2)), UsageError);
}

TEST(IntPoly, ArithmeticAndFormatting) {
  const IntPoly x = IntPoly::x();
  const IntPoly f = x * x - IntPoly::constant(5);
  EXPECT_EQ(f, IntPoly::binomial(2, 5));
  EXPECT_EQ(f.to_string(), "x^2 - 5");
  EXPECT_EQ((x - IntPoly::constant(1)).to_string(), "x - 1");
  EXPECT_EQ(pow(IntPoly::binomial(2, 1), 2).to_string(), "x^4 - 2x^2 + 1");
  EXPECT_EQ(IntPoly().to_string(), "0");
  EXPECT_EQ(f(3), 4);
  EXPECT_TRUE((f - f).is_zero());
}
