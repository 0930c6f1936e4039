#include "supercong/padic_lfun.hpp"

#include <fmt/format.h>

#include "supercong/bernoulli.hpp"
#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"

namespace supercong {

StirlingTable::StirlingTable(int j_max) : j_max_(j_max) {
  if (j_max < 0) throw InputError("Stirling table size must be >= 0");
  rows_.resize(static_cast<std::size_t>(j_max) + 1);
  rows_[0] = {BigInt(1)};
  for (int j = 0; j < j_max; ++j) {
    const auto& prev = rows_[static_cast<std::size_t>(j)];
    auto& next = rows_[static_cast<std::size_t>(j) + 1];
    next.assign(static_cast<std::size_t>(j) + 2, BigInt(0));
    // S(j+1, k) = S(j, k-1) - j S(j, k)
    for (int k = 0; k <= j + 1; ++k) {
      BigInt v = 0;
      if (k >= 1) v += prev[static_cast<std::size_t>(k) - 1];
      if (k <= j) v -= BigInt(j) * prev[static_cast<std::size_t>(k)];
      next[static_cast<std::size_t>(k)] = v;
    }
  }
}

const BigInt& StirlingTable::operator()(int j, int k) const {
  if (j < 0 || k < 0 || k > j || j > j_max_)
    throw InputError(fmt::format("Stirling index ({}, {}) outside the table", j, k));
  return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
}

BigInt stirling1(int j, int k) {
  if (j < 0 || k < 0 || k > j) throw InputError(fmt::format("Stirling number needs 0 <= k <= j, got ({}, {})", j, k));
  return StirlingTable(j)(j, k);
}

namespace {

void require_p_above_3(std::int64_t p) {
  if (p <= 3 || !is_prime(p)) throw InputError(fmt::format("expected a prime p > 3, got {}", p));
}

}  // namespace

Rational b_coeff(std::int64_t a, int k, std::int64_t F, std::int64_t p) {
  if (p < 5 || !is_prime(p)) throw InputError(fmt::format("b_k(a) needs a prime p >= 5, got {}", p));
  if (a < 1 || a > F) throw InputError(fmt::format("b_k(a) needs 1 <= a <= F, got a = {}", a));
  if (a % p == 0) throw InputError(fmt::format("p = {} divides a = {}", p, a));
  const Rational x(F, a);
  switch (k) {
    case 0:
      return Rational(1);
    case 1:
      return -x / Rational(2) - x * x / Rational(12);
    case 2:
      return x * x / Rational(12);
    default:
      throw InputError(fmt::format("b_k(a) is only truncated for k <= 2, got {}", k));
  }
}

Rational b_coeff_series(std::int64_t a, int k, std::int64_t F, int j_max) {
  if (a < 1 || F < 1 || k < 0 || j_max < k) throw InputError("invalid b_k(a) series arguments");
  const StirlingTable S(j_max);
  const Rational x(F, a);
  Rational acc;
  BigInt fact = 1;
  for (int j = 1; j <= k; ++j) fact *= j;
  Rational xj = pow(x, k);
  for (int j = k; j <= j_max; ++j) {
    if (j > k) {
      fact *= j;
      xj *= x;
    }
    acc += xj * bernoulli(j) * Rational(S(j, k), fact);
  }
  return acc;
}

CoefficientBundle a_coefficients_direct(const QuadChar& chi, std::int64_t p, Parallelism mode) {
  require_p_above_3(p);
  if (!chi.is_principal() && chi.conductor() % p != 0)
    throw ScopeError(fmt::format("character of discriminant {} is not divisible by p = {}", chi.discriminant(), p));
  const std::int64_t F = chi.is_principal() ? p : chi.conductor();
  const Rational pr(p);
  const Rational pm1(p - 1);
  // Per-term pieces, with x = F/a and F(a) the Fermat quotient:
  //   a_0: log_p(a) - x/2 - x^2/12
  //   a_1: p^2 F(a)^2 / (2 (p-1)^2) + x^2/12 - p F(a) x / (2 (p-1))
  auto term = [&](std::int64_t a, Rational& s_m1, Rational& s0, Rational& s1) {
    if (a % p == 0) return;
    const int c = chi(a);
    if (c == 0) return;
    const Rational fq = fermat_quotient(BigInt(static_cast<long>(a)), p);
    const Rational x(F, a);
    const Rational x2 = x * x;
    Rational t0 = log_surrogate(BigInt(static_cast<long>(a)), p) - x / Rational(2) - x2 / Rational(12);
    Rational t1 = pr * pr * fq * fq / (Rational(2) * pm1 * pm1) + x2 / Rational(12) - pr * fq * x / (Rational(2) * pm1);
    if (c > 0) {
      s_m1 += Rational(1);
      s0 += t0;
      s1 += t1;
    } else {
      s_m1 -= Rational(1);
      s0 -= t0;
      s1 -= t1;
    }
  };
  Rational sm1, s0, s1;
  if (mode == Parallelism::serial) {
    for (std::int64_t a = 1; a <= F; ++a) term(a, sm1, s0, s1);
  } else {
#pragma omp parallel
    {
      Rational lm1, l0, l1;
#pragma omp for schedule(static)
      for (std::int64_t a = 1; a <= F; ++a) term(a, lm1, l0, l1);
#pragma omp critical
      {
        sm1 += lm1;
        s0 += l0;
        s1 += l1;
      }
    }
  }
  const Rational Fr(F);
  CoefficientBundle b;
  b.a_minus1 = -sm1 / Fr;
  b.a0 = -s0 / Fr;
  b.a1 = -s1 / Fr;
  b.character = chi;
  b.p = p;
  b.F = F;
  return b;
}

void check_bundle_invariants(const CoefficientBundle& b) {
  const Rational expected = b.character.is_principal() ? Rational(1) / Rational(b.p) - Rational(1) : Rational(0);
  if (b.a_minus1 != expected)
    throw InvariantViolation(fmt::format("a_-1 = {} for disc {}, p = {}", b.a_minus1.str(), b.character.discriminant(), b.p));
  if (!vp(b.a0, b.p).at_least(0))
    throw InvariantViolation(fmt::format("a_0 not p-integral for disc {}, p = {}", b.character.discriminant(), b.p));
  if (!vp(b.a1, b.p).at_least(1))
    throw InvariantViolation(fmt::format("|a_1|_p >= 1 for disc {}, p = {}", b.character.discriminant(), b.p));
}

namespace {

Rational a1_closed_impl(const CharacterSplit& s, bool plain_br) {
  if (s.d == 5) throw ScopeError("the closed form of a_1 does not cover d = 5");
  const int r = static_cast<int>(s.r());
  const Rational euler = Rational(1) - Rational(s.psi_m(s.p)) * pow(Rational(s.p), r - 1);
  const Rational br = plain_br ? bernoulli(r) : gen_bernoulli(r, s.psi_m);
  const Rational inner = gen_bernoulli(3 * r, s.psi_m) / Rational(3) - euler * br;
  return -inner / Rational(2L * r * r);
}

}  // namespace

Rational a1_closed_quadratic(const CharacterSplit& split) { return a1_closed_impl(split, false); }

Rational a1_closed_quadratic_plain_br(const CharacterSplit& split) { return a1_closed_impl(split, true); }

Rational wilson_quotient(std::int64_t p) {
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(p - 1));
  f += 1;
  mpz_divexact_ui(f.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(p));
  return Rational(f);
}

Rational a0_closed_principal(std::int64_t p) {
  require_p_above_3(p);
  const Rational w = wilson_quotient(p);
  return w * (Rational(1) + Rational(p) * w / Rational(2));
}

Rational a1_closed_principal(std::int64_t p) {
  require_p_above_3(p);
  const int n = static_cast<int>(p - 1);
  const Rational R = Rational(1) - Rational(1, p);
  const Rational inner = bernoulli(2 * n) - Rational(2) * bernoulli(n) + R;
  return -inner / Rational(2L * n * n);
}

Rational lp_interp_value(int n, const CharacterSplit& split) {
  const std::int64_t p1 = split.p - 1;
  if (n < 1) throw InputError("interpolation index must be >= 1");
  if ((n - split.r()) % p1 != 0)
    throw ScopeError(fmt::format("n = {} is not {} mod {}; the twist is not quadratic", n, split.r(), p1));
  const Rational euler = Rational(1) - Rational(split.psi_m(split.p)) * pow(Rational(split.p), n - 1);
  return -euler * gen_bernoulli(n, split.psi_m) / Rational(n);
}

Rational lp_interp_value(int n, std::int64_t p) {
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
  if (n < 1) throw InputError("interpolation index must be >= 1");
  if (n % (p - 1) != 0) throw ScopeError(fmt::format("n = {} is not 0 mod {}", n, p - 1));
  const Rational euler = Rational(1) - pow(Rational(p), n - 1);
  return -euler * bernoulli(n) / Rational(n);
}

Rational zeta_star_value(int n, std::int64_t p) {
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
  if (n < 1 || n % (p - 1) != 0) throw InputError(fmt::format("zeta*_p(1 - n) needs n a positive multiple of {}", p - 1));
  const Rational R = Rational(1) - Rational(1, p);
  return lp_interp_value(n, p) + R / Rational(n);
}

Rational lp1_via_class_number(const FieldInvariants& inv, std::int64_t p) {
  if (!is_prime(p) || inv.d % p != 0) throw InputError(fmt::format("p = {} must be a prime dividing d = {}", p, inv.d));
  if (mpz_divisible_ui_p(inv.t.get_mpz_t(), static_cast<unsigned long>(p)))
    throw InvariantViolation(fmt::format("p = {} divides t for d = {}", p, inv.d));
  const Rational kernel = unit_log_series(BigInt(static_cast<long>(inv.d)), inv.t, inv.u, 1);
  return Rational(2 * inv.h) / Rational(inv.delta) * kernel;
}

}  // namespace supercong
