#pragma once

// Arithmetic invariants of real quadratic fields Q(sqrt d): discriminant,
// fundamental unit from the continued fraction of the ring generator, unit
// norm, and (narrow) class number by counting cycles of reduced indefinite
// binary quadratic forms.

#include <cstdint>
#include <utility>
#include <vector>

#include "supercong/rational.hpp"

namespace supercong {

enum class Parallelism { serial, openmp };

bool is_squarefree(std::int64_t n);

/// Prime factorization by trial division, ascending primes.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

struct DiscriminantShell {
  int delta;       // 1 if d = 1 mod 4, else 2
  std::int64_t D;  // delta^2 d
};

/// Throws InputError unless d > 1 is squarefree.
DiscriminantShell invariants_shell(std::int64_t d);

/// eps = (delta/2)(t + u sqrt d), the smallest unit > 1.
struct FundamentalUnit {
  BigInt t;
  BigInt u;
  int delta = 0;
  int norm = 0;           // N(eps) = +-1
  std::int64_t period = 0;  // period length of the expansion used
};

/// Expands (1 + sqrt d)/2 (d = 1 mod 4) or sqrt d with the integer (P, Q)
/// recurrence and takes the convergent at the end of the first period.
FundamentalUnit fundamental_unit(std::int64_t d);

/// Indefinite form a x^2 + b x y + c y^2.
struct QuadraticForm {
  std::int64_t a;
  std::int64_t b;
  std::int64_t c;
  friend auto operator<=>(const QuadraticForm&, const QuadraticForm&) = default;
};

/// 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b (exact integer test).
bool is_reduced(const QuadraticForm& f, std::int64_t D);

/// Reduction operator rho: (a, b, c) -> (c, b', (b'^2 - D)/(4c)) with
/// b' = -b mod 2c and sqrt D - 2|c| < b' < sqrt D.
QuadraticForm rho(const QuadraticForm& f, std::int64_t D);

/// All reduced forms of discriminant D (D > 0, not a square), sorted.
std::vector<QuadraticForm> reduced_forms(std::int64_t D, Parallelism mode = Parallelism::openmp);

struct ClassNumber {
  std::int64_t h = 0;
  std::int64_t h_plus = 0;
  std::int64_t reduced_form_count = 0;
};

/// Narrow class number = number of rho-cycles of reduced forms of the field
/// discriminant; h = h_plus when N(eps) = -1, else h_plus / 2.
ClassNumber class_number(std::int64_t d, Parallelism mode = Parallelism::openmp);
ClassNumber class_number_with_norm(std::int64_t d, int unit_norm,
                                   Parallelism mode = Parallelism::openmp);

struct FieldInvariants {
  std::int64_t d = 0;
  int delta = 0;
  std::int64_t D = 0;
  BigInt t;
  BigInt u;
  int unit_norm = 0;
  std::int64_t h = 0;
  std::int64_t h_plus = 0;
  std::int64_t cf_period = 0;
};

FieldInvariants field_invariants(std::int64_t d, Parallelism mode = Parallelism::openmp);

/// v_p(u) for the fundamental unit of Q(sqrt d).
long vp_u(std::int64_t d, std::int64_t p);

}  // namespace supercong
