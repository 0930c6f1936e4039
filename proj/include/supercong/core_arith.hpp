#pragma once

// p-adic valuation, the "mod p^k" congruence relation on rationals, and the
// small p-adic toolkit (Fermat quotients, Teichmueller lifts, truncated
// logarithms) that the coefficient formulas are written in.

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

#include "supercong/rational.hpp"

namespace supercong {

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::int64_t n);

/// v_p of a rational, with +infinity for zero.
class Valuation {
 public:
  static Valuation infinite() { return Valuation(); }
  explicit Valuation(long v) : finite_(true), value_(v) {}

  [[nodiscard]] bool is_infinite() const { return !finite_; }
  /// Finite value; throws InvariantViolation when infinite.
  [[nodiscard]] long value() const;
  [[nodiscard]] bool at_least(long k) const { return !finite_ || value_ >= k; }
  /// Clamped to long range (infinite -> LONG_MAX); handy for reporting.
  [[nodiscard]] long clamped() const { return finite_ ? value_ : std::numeric_limits<long>::max(); }
  [[nodiscard]] std::string str() const { return finite_ ? std::to_string(value_) : "inf"; }

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (!a.finite_ || !b.finite_) return b.finite_ <=> a.finite_;
    return a.value_ <=> b.value_;
  }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (!a.finite_ || !b.finite_) return infinite();
    return Valuation(a.value_ + b.value_);
  }

 private:
  Valuation() = default;
  bool finite_ = false;
  long value_ = 0;
};

/// A prime p together with a congruence depth k (modulus p^k), 1 <= k <= 3.
class PadicContext {
 public:
  PadicContext(std::int64_t p, int depth);

  [[nodiscard]] std::int64_t prime() const { return p_; }
  [[nodiscard]] int depth() const { return depth_; }
  /// p^depth
  [[nodiscard]] BigInt modulus() const;

 private:
  std::int64_t p_;
  int depth_;
};

Valuation vp(const BigInt& x, std::int64_t p);
Valuation vp(const Rational& x, std::int64_t p);

bool is_p_integral(const Rational& x, std::int64_t p);

/// a == b mod p^k in the p-integral sense: v_p(a - b) >= k.
bool congruent(const Rational& a, const Rational& b, const PadicContext& ctx);

/// (a^(p-1) - 1) / p.
Rational fermat_quotient(const BigInt& a, std::int64_t p);

/// (1/(p-1)) (p F(a) - p^2 F(a)^2 / 2), congruent to log_p(a) mod p^3 for p > 3.
Rational log_surrogate(const BigInt& a, std::int64_t p);

/// omega(a) = a^(p^(k-1)) mod p^k, reduced into [0, p^k).
BigInt teichmuller(const BigInt& a, const PadicContext& ctx);

/// <a> = a * omega(a)^(-1) mod p^k; always 1 mod p.
BigInt diamond(const BigInt& a, const PadicContext& ctx);

/// sum_{n=0}^{n_max} d^n / (2n+1) * (u/t)^(2n+1): the truncated series for
/// log_p(eps)/sqrt(d) with eps = (delta/2)(t + u sqrt d).
Rational unit_log_series(const BigInt& d, const BigInt& t, const BigInt& u, int n_max);

/// Modular helpers on 64-bit words.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

}  // namespace supercong
