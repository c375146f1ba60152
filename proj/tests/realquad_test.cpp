#include <gtest/gtest.h>

#include <cmath>

#include "legdet/realquad.hpp"
#include "oracles.hpp"

using namespace legdet;

namespace {

std::vector<std::uint64_t> primes_1mod4_below(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 5; p < limit; p += 4)
    if (oracle::is_prime(p)) out.push_back(p);
  return out;
}

double log_of(const QuadElem& e) {
  const double sp = std::sqrt(static_cast<double>(e.p()));
  return std::log(e.a().get_d() + e.b().get_d() * sp);
}

}  // namespace

TEST(QuadElem, ArithmeticAndNorm) {
  const QuadElem eps(5, 1, 1);  // (1+sqrt5)/2
  EXPECT_EQ(eps.norm(), -1);
  EXPECT_EQ(eps * eps, QuadElem(5, 3, 1));  // (3+sqrt5)/2
  EXPECT_EQ(pow(eps, 3), QuadElem(5, 4, 2));  // 2+sqrt5
  EXPECT_EQ(pow(eps, 0), QuadElem::one(5));
  EXPECT_EQ(pow(eps, 3).a(), mpq_class(2));
  EXPECT_EQ(eps.a(), mpq_class(1, 2));
  EXPECT_EQ(eps.to_string(), "(1+1√5)/2");
  EXPECT_EQ(QuadElem(17, 8, 2).to_string(), "4+1√17");
  EXPECT_EQ(QuadElem(17, 8, -2).to_string(), "4-1√17");
}

TEST(QuadElem, RejectsBadInput) {
  EXPECT_THROW(QuadElem(7, 2, 0), UsageError);
  EXPECT_THROW(QuadElem(5, 1, 2), UsageError);
}

TEST(FundamentalUnit, KnownValues) {
  EXPECT_EQ(fundamental_unit(5), QuadElem(5, 1, 1));
  EXPECT_EQ(fundamental_unit(13), QuadElem(13, 3, 1));
  EXPECT_EQ(fundamental_unit(17), QuadElem(17, 8, 2));
  EXPECT_EQ(fundamental_unit(29), QuadElem(29, 5, 1));
  EXPECT_EQ(fundamental_unit(37), QuadElem(37, 12, 2));
  EXPECT_EQ(pow(fundamental_unit(13), 3), QuadElem(13, 36, 10));  // 18+5sqrt13
}

TEST(FundamentalUnit, NormMinusOneAndMinimalByBoundedSearch) {
  for (std::uint64_t p : primes_1mod4_below(400)) {
    const QuadElem eps = fundamental_unit(p);
    EXPECT_EQ(eps.norm(), -1) << p;
    EXPECT_GT(eps.twice_a(), 0);
    EXPECT_GT(eps.twice_b(), 0);
    // The smallest solution of t^2 - p u^2 = -4 is the fundamental unit
    // when that unit has norm -1. Search only as far as the claimed u.
    const auto u = eps.twice_b().get_ui();
    if (u > 2000000) continue;
    const auto found = oracle::smallest_norm_minus4(p, u);
    ASSERT_TRUE(found.has_value()) << p;
    EXPECT_EQ(found->first, eps.twice_a()) << p;
    EXPECT_EQ(found->second, eps.twice_b()) << p;
  }
}

TEST(FundamentalUnit, RejectsWrongClass) {
  EXPECT_THROW(fundamental_unit(7), UsageError);
  EXPECT_THROW(fundamental_unit(9), UsageError);
}

TEST(ReducedForms, AreReducedAndClosedUnderRho) {
  for (std::uint64_t p : primes_1mod4_below(500)) {
    const auto forms = reduced_forms(p);
    ASSERT_FALSE(forms.empty());
    for (const auto& f : forms) {
      EXPECT_EQ(f.discriminant(), static_cast<std::int64_t>(p));
      EXPECT_TRUE(is_reduced(f));
      const QuadForm g = rho(f);
      EXPECT_EQ(g.discriminant(), static_cast<std::int64_t>(p));
      EXPECT_TRUE(is_reduced(g));
    }
  }
}

TEST(ClassNumberReal, MatchesAnalyticFormula) {
  for (std::uint64_t p : primes_1mod4_below(3000)) {
    const double hr = oracle::regulator_times_h(p);
    const double h = hr / log_of(fundamental_unit(p));
    ASSERT_NEAR(h, static_cast<double>(class_number_real(p)), 1e-6) << p;
  }
}

TEST(ClassNumberReal, KnownValues) {
  EXPECT_EQ(class_number_real(5), 1u);
  EXPECT_EQ(class_number_real(229), 3u);
  EXPECT_EQ(class_number_real(257), 3u);
  EXPECT_EQ(class_number_real(401), 5u);
}

TEST(UnitPowerCoeffs, SmallPrimes) {
  const UnitCoeffs u5 = unit_power_coeffs(5);
  EXPECT_EQ(u5.h, 1u);
  EXPECT_EQ(u5.prime_power, 3u);
  EXPECT_EQ(u5.a, mpq_class(1, 2));
  EXPECT_EQ(u5.b, mpq_class(1, 2));
  EXPECT_EQ(u5.a_prime, mpq_class(2));
  EXPECT_EQ(u5.b_prime, mpq_class(1));

  const UnitCoeffs u13 = unit_power_coeffs(13);
  EXPECT_EQ(u13.a, mpq_class(3, 2));
  EXPECT_EQ(u13.b, mpq_class(1, 2));
  EXPECT_EQ(u13.a_prime, mpq_class(18));
  EXPECT_EQ(u13.b_prime, mpq_class(5));

  const UnitCoeffs u17 = unit_power_coeffs(17);
  EXPECT_EQ(u17.prime_power, 1u);
  EXPECT_EQ(u17.a, mpq_class(4));
  EXPECT_EQ(u17.b, mpq_class(1));
  EXPECT_EQ(u17.a_prime, mpq_class(4));
  EXPECT_EQ(u17.b_prime, mpq_class(1));
}
