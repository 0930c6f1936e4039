#include <gtest/gtest.h>

#include "supercong/bernoulli.hpp"
#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"
#include "supercong/padic_lfun.hpp"

using namespace supercong;

namespace {

const std::int64_t kPrimes[] = {5, 7, 11, 13, 17, 19};

// Squarefree d = p m <= d_max with d > 5.
std::vector<CharacterSplit> splits(std::int64_t d_max) {
  std::vector<CharacterSplit> out;
  for (std::int64_t p : kPrimes)
    for (std::int64_t d = 2 * p; d <= d_max; d += p)
      if (is_squarefree(d)) out.push_back(split_character(d, p));
  return out;
}

bool agree(const Rational& a, const Rational& b, std::int64_t p, int depth) {
  return congruent(a, b, PadicContext(p, depth));
}

}  // namespace

TEST(Stirling, Examples) {
  EXPECT_EQ(stirling1(3, 2), -3);
  EXPECT_EQ(stirling1(4, 1), -6);
  EXPECT_EQ(stirling1(0, 0), 1);
  for (int j = 0; j <= 10; ++j) EXPECT_EQ(stirling1(j, j), 1);
  EXPECT_THROW(stirling1(2, 3), InputError);
  StirlingTable t(5);
  EXPECT_EQ(t(5, 2), -50);
  EXPECT_THROW(t(6, 1), InputError);
}

TEST(Stirling, RowSumsAndFallingFactorial) {
  StirlingTable t(25);
  BigInt fact = 1;
  for (int j = 1; j <= 25; ++j) {
    fact *= j;
    BigInt sum = 0, abs_sum = 0;
    for (int k = 0; k <= j; ++k) {
      sum += t(j, k);
      abs_sum += abs(t(j, k));
      if (k >= 1) {
        const BigInt next = t(j - 1, k - 1) - BigInt(j - 1) * (k <= j - 1 ? t(j - 1, k) : BigInt(0));
        EXPECT_EQ(t(j, k), next) << j << " " << k;
      }
    }
    EXPECT_EQ(t(j, 0), 0);
    if (j >= 2) EXPECT_EQ(sum, 0);
    EXPECT_EQ(abs_sum, fact);
    // x(x-1)...(x-j+1) at x = 7
    BigInt falling = 1, poly = 0, xp = 1;
    for (int i = 0; i < j; ++i) falling *= 7 - i;
    for (int k = 0; k <= j; ++k, xp *= 7) poly += t(j, k) * xp;
    EXPECT_EQ(poly, falling);
  }
}

TEST(BCoeff, Examples) {
  EXPECT_EQ(b_coeff(3, 0, 7, 7), Rational(1));
  EXPECT_EQ(b_coeff(1, 1, 5, 5), Rational(-55, 12));
  EXPECT_EQ(b_coeff(2, 2, 5, 5), Rational(25, 48));
  EXPECT_THROW(b_coeff(5, 1, 10, 5), InputError);
  EXPECT_THROW(b_coeff(1, 1, 3, 3), InputError);
  EXPECT_THROW(b_coeff(1, 3, 5, 5), InputError);
}

TEST(BCoeff, TruncationAgreesWithSeriesModP3) {
  for (std::int64_t p : kPrimes)
    for (std::int64_t F : {p, 3 * p, 8 * p})
      for (std::int64_t a = 1; a <= F; ++a) {
        if (a % p == 0) continue;
        for (int k = 0; k <= 2; ++k)
          ASSERT_TRUE(vp(b_coeff(a, k, F, p) - b_coeff_series(a, k, F, 12), p).at_least(3)) << p << " " << F << " " << a;
      }
}

TEST(Coefficients, PrincipalExamples) {
  const auto b5 = a_coefficients_direct(QuadChar::principal(), 5);
  EXPECT_EQ(b5.a_minus1, Rational(-4, 5));
  EXPECT_EQ(b5.F, 5);
  const auto b7 = a_coefficients_direct(QuadChar::principal(), 7);
  EXPECT_TRUE(agree(b7.a0, a0_closed_principal(7), 7, 2));
  EXPECT_TRUE(agree(b7.a0, Rational(5), 7, 1));
  EXPECT_THROW(a_coefficients_direct(QuadChar::principal(), 3), InputError);
  EXPECT_THROW(a_coefficients_direct(QuadChar::from_discriminant(5), 7), ScopeError);
}

TEST(Coefficients, BundleInvariantsOnGrid) {
  for (std::int64_t p : kPrimes) check_bundle_invariants(a_coefficients_direct(QuadChar::principal(), p));
  for (const auto& s : splits(500)) {
    const auto b = a_coefficients_direct(s.chi_D, s.p, Parallelism::serial);
    EXPECT_TRUE(b.a_minus1.is_zero());
    EXPECT_EQ(b.F, s.D);
    EXPECT_NO_THROW(check_bundle_invariants(b)) << s.d << " " << s.p;
  }
}

TEST(Coefficients, SerialAndOpenMPAgree) {
  for (auto [d, p] : std::vector<std::pair<std::int64_t, std::int64_t>>{{14, 7}, {65, 5}, {437, 19}}) {
    const auto s = split_character(d, p);
    const auto a = a_coefficients_direct(s.chi_D, p, Parallelism::serial);
    const auto b = a_coefficients_direct(s.chi_D, p, Parallelism::openmp);
    EXPECT_EQ(a.a0, b.a0);
    EXPECT_EQ(a.a1, b.a1);
  }
  const auto a = a_coefficients_direct(QuadChar::principal(), 13, Parallelism::serial);
  const auto b = a_coefficients_direct(QuadChar::principal(), 13, Parallelism::openmp);
  EXPECT_EQ(a.a1, b.a1);
}

TEST(Coefficients, InvariantCheckRejectsBadBundles) {
  auto b = a_coefficients_direct(QuadChar::principal(), 7);
  auto bad = b;
  bad.a_minus1 = Rational(0);
  EXPECT_THROW(check_bundle_invariants(bad), InvariantViolation);
  bad = b;
  bad.a1 = Rational(1, 3);
  EXPECT_THROW(check_bundle_invariants(bad), InvariantViolation);
  bad = b;
  bad.a0 = Rational(1, 7);
  EXPECT_THROW(check_bundle_invariants(bad), InvariantViolation);
}

TEST(ClosedForms, WilsonQuotient) {
  EXPECT_EQ(wilson_quotient(5), Rational(5));
  EXPECT_EQ(wilson_quotient(7), Rational(103));
  EXPECT_EQ(wilson_quotient(13), Rational(36846277));
  EXPECT_THROW(wilson_quotient(9), InputError);
}

TEST(ClosedForms, PrincipalExamples) {
  EXPECT_EQ(a0_closed_principal(5), Rational(135, 2));
  EXPECT_EQ(a1_closed_principal(5), Rational(-5, 192));
  EXPECT_TRUE(vp(a1_closed_principal(5), 5).at_least(1));
  EXPECT_TRUE(agree(a0_closed_principal(7), Rational(5), 7, 1));
}

TEST(ClosedForms, QuadraticExamples) {
  const auto s14 = split_character(14, 7);
  EXPECT_EQ(s14.psi_m.discriminant(), -8);
  EXPECT_TRUE(agree(a1_closed_quadratic(s14), a_coefficients_direct(s14.chi_D, 7).a1, 7, 2));
  const auto s65 = split_character(65, 5);
  EXPECT_EQ(s65.psi_m.discriminant(), 13);
  EXPECT_TRUE(agree(a1_closed_quadratic(s65), a_coefficients_direct(s65.chi_D, 5).a1, 5, 2));
  EXPECT_THROW(a1_closed_quadratic(split_character(5, 5)), ScopeError);
}

TEST(ClosedForms, DualPathAgreementOnGrid) {
  for (std::int64_t p : kPrimes) {
    const auto b = a_coefficients_direct(QuadChar::principal(), p);
    EXPECT_TRUE(agree(a0_closed_principal(p), b.a0, p, 2)) << p;
    EXPECT_TRUE(agree(a1_closed_principal(p), b.a1, p, 2)) << p;
    EXPECT_TRUE(agree(a0_closed_principal(p), wilson_quotient(p), p, 1)) << p;
  }
  for (const auto& s : splits(500)) {
    const auto a1 = a_coefficients_direct(s.chi_D, s.p).a1;
    const Rational closed = a1_closed_quadratic(s);
    EXPECT_TRUE(vp(closed, s.p).at_least(1)) << s.d;
    EXPECT_TRUE(agree(closed, a1, s.p, 2)) << s.d << " " << s.p;
  }
}

TEST(ClosedForms, PlainBernoulliReadingDisagrees) {
  int disagree = 0, total = 0;
  for (const auto& s : splits(500)) {
    ++total;
    if (!agree(a1_closed_quadratic_plain_br(s), a_coefficients_direct(s.chi_D, s.p).a1, s.p, 2)) ++disagree;
  }
  EXPECT_GT(disagree, total / 2);
}

TEST(Interpolation, Examples) {
  const auto s = split_character(14, 7);
  const Rational euler = Rational(1) - Rational(s.psi_m(7)) * Rational(49);
  EXPECT_EQ(lp_interp_value(3, s), -euler * gen_bernoulli(3, s.psi_m) / Rational(3));
  EXPECT_THROW(lp_interp_value(4, s), ScopeError);
  EXPECT_THROW(lp_interp_value(0, s), InputError);
  EXPECT_EQ(lp_interp_value(6, 7), -(Rational(1) - pow(Rational(7), 5)) * bernoulli(6) / Rational(6));
  EXPECT_THROW(lp_interp_value(4, 7), ScopeError);
  for (const auto& sp : splits(300)) {
    if (sp.p == 5) continue;
    const Rational e = Rational(1) - Rational(sp.psi_m(sp.p)) * pow(Rational(sp.p), sp.r() - 1);
    EXPECT_TRUE(agree(e, Rational(1), sp.p, 2)) << sp.d;
  }
}

TEST(Interpolation, ZetaStar) {
  EXPECT_EQ(zeta_star_value(4, 5), Rational(-5, 6));
  EXPECT_EQ(zeta_star_value(6, 7),
            -(Rational(1) - pow(Rational(7), 5)) * bernoulli(6) / Rational(6) + Rational(6, 7) / Rational(6));
  EXPECT_THROW(zeta_star_value(5, 5), InputError);
  for (std::int64_t p : kPrimes)
    for (int k = 1; k <= 4; ++k) {
      const int n = k * static_cast<int>(p - 1);
      const Rational R = Rational(1) - Rational(1, p);
      const Rational simple = -bernoulli(n) / Rational(n) + R / Rational(n);
      EXPECT_TRUE(vp(zeta_star_value(n, p) - simple, p).at_least(2));
    }
}

TEST(Interpolation, CorollaryCongruencesQuadratic) {
  for (const auto& s : splits(300)) {
    const auto a1 = a_coefficients_direct(s.chi_D, s.p).a1;
    const int r = static_cast<int>(s.r());
    const int p1 = static_cast<int>(s.p - 1);
    for (int i = 0; i <= 2; ++i)
      for (int j = i + 1; j <= 2; ++j) {
        const int n = r + i * p1, m = r + j * p1;
        const Rational lm = lp_interp_value(m, s), ln = lp_interp_value(n, s);
        EXPECT_TRUE(agree(lm, ln, s.p, 1)) << s.d << " " << m << " " << n;
        EXPECT_TRUE(agree(lm, ln + a1 * Rational(m - n), s.p, 2)) << s.d << " " << m << " " << n;
      }
  }
}

TEST(Interpolation, CorollaryCongruencesPrincipal) {
  for (std::int64_t p : kPrimes) {
    const auto b = a_coefficients_direct(QuadChar::principal(), p);
    const int p1 = static_cast<int>(p - 1);
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j) {
        const Rational zm = zeta_star_value(j * p1, p), zn = zeta_star_value(i * p1, p);
        EXPECT_TRUE(agree(zm, zn, p, 1));
        EXPECT_TRUE(agree(zm, zn + b.a1 * Rational((j - i) * p1), p, 2)) << p;
        EXPECT_TRUE(agree(zn, b.a0, p, 1));
      }
  }
}

TEST(ClassNumberFormula, Examples) {
  EXPECT_EQ(lp1_via_class_number(field_invariants(14), 7), Rational(3596, 10125));
  EXPECT_EQ(lp1_via_class_number(field_invariants(10), 5), Rational(74, 81));
  EXPECT_THROW(lp1_via_class_number(field_invariants(14), 5), InputError);
  FieldInvariants zero = field_invariants(14);
  zero.u = 0;
  EXPECT_EQ(lp1_via_class_number(zero, 7), Rational(0));
  FieldInvariants bad = field_invariants(14);
  bad.t = 7;
  EXPECT_THROW(lp1_via_class_number(bad, 7), InvariantViolation);
}

TEST(ClassNumberFormula, ProofChainRoundTrip) {
  // L_p(1) = L_p(1 - r) - r a_1 mod p^2 fixes the sign of the a_1 term.
  for (const auto& s : splits(500)) {
    if (s.p == 5) continue;
    const Rational lp1 = lp1_via_class_number(field_invariants(s.d), s.p);
    const Rational chain = lp_interp_value(static_cast<int>(s.r()), s) - Rational(s.r()) * a1_closed_quadratic(s);
    EXPECT_TRUE(agree(lp1, chain, s.p, 2)) << s.d << " " << s.p;
  }
}
