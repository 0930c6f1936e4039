#pragma once

// Coefficients of the expansion L_p(1 - s, chi) = a_{-1}/s + a_0 + a_1 s + ...
// for the principal character and for real quadratic characters whose
// conductor is divisible by p, together with the closed forms they are
// compared against and the interpolation values at negative integers.
//
// Every p-adic quantity here is an exact rational agreeing with the true
// value to the depth it is used at (log_p mod p^3, conclusions mod p^2).

#include <cstdint>
#include <vector>

#include "supercong/characters.hpp"
#include "supercong/quadratic_field.hpp"
#include "supercong/rational.hpp"

namespace supercong {

/// Signed Stirling numbers of the first kind, rows 0..j_max.
class StirlingTable {
 public:
  explicit StirlingTable(int j_max);
  [[nodiscard]] int j_max() const { return j_max_; }
  /// S(j, k); throws InputError when k > j or j > j_max.
  [[nodiscard]] const BigInt& operator()(int j, int k) const;

 private:
  int j_max_;
  std::vector<std::vector<BigInt>> rows_;
};

BigInt stirling1(int j, int k);

/// Truncated b_k(a) for k in {0, 1, 2}, accurate mod p^3:
///   b_0 = 1, b_1 = -(F/a)/2 - (F/a)^2/12, b_2 = (F/a)^2/12.
Rational b_coeff(std::int64_t a, int k, std::int64_t F, std::int64_t p);

/// sum_{j=k}^{j_max} (F/a)^j B_j / j! S(j, k), the series b_coeff truncates.
Rational b_coeff_series(std::int64_t a, int k, std::int64_t F, int j_max);

struct CoefficientBundle {
  Rational a_minus1;
  Rational a0;
  Rational a1;
  QuadChar character = QuadChar::principal();
  std::int64_t p = 0;
  std::int64_t F = 0;  // p for the principal character, D otherwise
};

/// Evaluates a_{-1}, a_0, a_1 as restricted character sums over 1 <= a <= F,
/// p not dividing a. Quadratic characters must have p | D (ScopeError
/// otherwise); p > 3.
CoefficientBundle a_coefficients_direct(const QuadChar& chi, std::int64_t p,
                                        Parallelism mode = Parallelism::openmp);

/// Throws InvariantViolation unless a_{-1} has its exact value,
/// v_p(a_0) >= 0 and v_p(a_1) >= 1.
void check_bundle_invariants(const CoefficientBundle& b);

/// a_1 = -(1/(2 r^2)) (B_{3r,psi}/3 - (1 - psi(p) p^(r-1)) B_{r,psi}), r = (p-1)/2.
/// Refuses d = 5, where extra terms enter.
Rational a1_closed_quadratic(const CharacterSplit& split);

/// The same expression with the plain Bernoulli number B_r in the second
/// term, i.e. the lemma exactly as typeset. Kept to show that it disagrees
/// with the direct sum.
Rational a1_closed_quadratic_plain_br(const CharacterSplit& split);

/// ((p-1)! + 1) / p.
Rational wilson_quotient(std::int64_t p);

/// W_p (1 + p W_p / 2).
Rational a0_closed_principal(std::int64_t p);
/// -(1/(2 (p-1)^2)) (B_{2(p-1)} - 2 B_{p-1} + R), R = 1 - 1/p.
Rational a1_closed_principal(std::int64_t p);

/// L_p(1 - n, chi_D) = -(1 - psi_m(p) p^(n-1)) B_{n,psi_m} / n for n = r mod (p-1),
/// where the Teichmueller twist of chi_D is psi_m. Other n raise ScopeError.
Rational lp_interp_value(int n, const CharacterSplit& split);
/// L_p(1 - n) for the principal character, n = 0 mod (p-1): -(1 - p^(n-1)) B_n / n.
Rational lp_interp_value(int n, std::int64_t p);

/// zeta*_p(1 - n) = L_p(1 - n) + R/n for n = k(p-1), k >= 1.
Rational zeta_star_value(int n, std::int64_t p);

/// (2h/delta) (u/t + (d/3)(u/t)^3), congruent to L_p(1, chi_D) mod p^2 by the
/// p-adic class number formula. Requires p | d; p | t is an InvariantViolation.
Rational lp1_via_class_number(const FieldInvariants& inv, std::int64_t p);

}  // namespace supercong
