#include "supercong/core_arith.hpp"

#include <fmt/format.h>

#include "supercong/errors.hpp"

namespace supercong {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  auto un = static_cast<std::uint64_t>(n);
  std::uint64_t d = un - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic below 2^64.
  for (std::uint64_t a : {2, 325, 9375, 28178, 450775, 9780504, 1795265022}) {
    a %= un;
    if (a == 0) continue;
    std::uint64_t x = pow_mod(a, d, un);
    if (x == 1 || x == un - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, un);
      if (x == un - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

long Valuation::value() const {
  if (!finite_) throw InvariantViolation("value() of an infinite valuation");
  return value_;
}

PadicContext::PadicContext(std::int64_t p, int depth) : p_(p), depth_(depth) {
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
  if (depth < 1 || depth > 3) throw InputError(fmt::format("depth {} outside 1..3", depth));
}

BigInt PadicContext::modulus() const {
  BigInt m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(depth_));
  return m;
}

namespace {

void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
}

long remove_factor(const BigInt& x, std::int64_t p) {
  BigInt rest;
  BigInt pp(static_cast<long>(p));
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

void require_unit(const BigInt& a, std::int64_t p) {
  if (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p)))
    throw InputError(fmt::format("{} is divisible by p = {}", a.get_str(), p));
}

}  // namespace

Valuation vp(const BigInt& x, std::int64_t p) {
  require_prime(p);
  if (x == 0) return Valuation::infinite();
  return Valuation(remove_factor(x, p));
}

Valuation vp(const Rational& x, std::int64_t p) {
  require_prime(p);
  if (x.is_zero()) return Valuation::infinite();
  return Valuation(remove_factor(x.num(), p) - remove_factor(x.den(), p));
}

bool is_p_integral(const Rational& x, std::int64_t p) { return vp(x, p).at_least(0); }

bool congruent(const Rational& a, const Rational& b, const PadicContext& ctx) {
  return vp(a - b, ctx.prime()).at_least(ctx.depth());
}

Rational fermat_quotient(const BigInt& a, std::int64_t p) {
  require_prime(p);
  require_unit(a, p);
  BigInt power;
  mpz_pow_ui(power.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p - 1));
  BigInt q = power - 1;
  // exact by Fermat's little theorem
  mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
  return Rational(q);
}

Rational log_surrogate(const BigInt& a, std::int64_t p) {
  Rational f = fermat_quotient(a, p);
  Rational pr(static_cast<long>(p));
  return (pr * f - pr * pr * f * f / Rational(2)) / Rational(static_cast<long>(p - 1));
}

BigInt teichmuller(const BigInt& a, const PadicContext& ctx) {
  require_unit(a, ctx.prime());
  BigInt mod = ctx.modulus();
  BigInt e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(ctx.prime()),
                static_cast<unsigned long>(ctx.depth() - 1));
  BigInt base = a % mod;
  if (base < 0) base += mod;
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return r;
}

BigInt diamond(const BigInt& a, const PadicContext& ctx) {
  BigInt mod = ctx.modulus();
  BigInt w = teichmuller(a, ctx);
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), w.get_mpz_t(), mod.get_mpz_t());
  BigInt r = (a * inv) % mod;
  if (r < 0) r += mod;
  return r;
}

Rational unit_log_series(const BigInt& d, const BigInt& t, const BigInt& u, int n_max) {
  if (t == 0) throw InputError("unit_log_series: t = 0");
  if (n_max < 0) throw InputError("unit_log_series: n_max < 0");
  const Rational x(u, t);
  const Rational x2 = x * x;
  const Rational dr(d);
  Rational term = x;  // d^n x^(2n+1)
  Rational sum;
  for (int n = 0; n <= n_max; ++n) {
    sum += term / Rational(2L * n + 1);
    term *= dr * x2;
  }
  return sum;
}

}  // namespace supercong
