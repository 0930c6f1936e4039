#include "supercong/characters.hpp"

#include <fmt/format.h>

#include <numeric>

#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"
#include "supercong/quadratic_field.hpp"

namespace supercong {

namespace {

// Jacobi symbol (a/n) for odd n > 0.
int jacobi(std::int64_t a, std::int64_t n) {
  a %= n;
  if (a < 0) a += n;
  int t = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      std::int64_t r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

}  // namespace

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int s = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) s = -s;
  }
  while ((n & 1) == 0) {
    n >>= 1;
    if ((a & 1) == 0) return 0;
    std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) s = -s;
  }
  if (n == 1) return s;
  return s * jacobi(a, n);
}

int legendre(std::int64_t a, std::int64_t p) {
  if (p == 2 || !is_prime(p)) throw InputError(fmt::format("legendre: {} is not an odd prime", p));
  return kronecker(a, p);
}

bool is_fundamental_discriminant(std::int64_t disc) {
  if (disc == 0 || disc == 1) return false;
  std::int64_t r = ((disc % 4) + 4) % 4;
  auto abs_sqfree = [](std::int64_t x) { return is_squarefree(x < 0 ? -x : x); };
  if (r == 1) return abs_sqfree(disc);
  if (r == 0) {
    std::int64_t n = disc / 4;
    std::int64_t nr = ((n % 4) + 4) % 4;
    return (nr == 2 || nr == 3) && abs_sqfree(n);
  }
  return false;
}

QuadChar QuadChar::from_discriminant(std::int64_t disc) {
  if (!is_fundamental_discriminant(disc))
    throw InputError(fmt::format("{} is not a fundamental discriminant", disc));
  return QuadChar(disc);
}

std::int64_t p_star(std::int64_t p) { return (p % 4 == 1) ? p : -p; }

CharacterSplit split_character(std::int64_t d, std::int64_t p) {
  if (p <= 3 || !is_prime(p)) throw InputError(fmt::format("split_character: need prime p > 3, got {}", p));
  if (d <= 1 || !is_squarefree(d)) throw InputError(fmt::format("split_character: {} is not squarefree > 1", d));
  if (d % p != 0) throw InputError(fmt::format("split_character: {} does not divide {}", p, d));
  const auto [delta, D] = invariants_shell(d);
  const std::int64_t ps = p_star(p);
  const std::int64_t Dm = D / ps;
  CharacterSplit s{d, p, d / p, delta, D, QuadChar::from_discriminant(D),
                   Dm == 1 ? QuadChar::principal() : QuadChar::from_discriminant(Dm)};
  if (s.psi_m.conductor() != static_cast<std::int64_t>(delta) * delta * s.m)
    throw InvariantViolation(fmt::format("psi_m conductor mismatch for d = {}", d));
  if (s.psi_m.parity() != ((s.r() % 2 == 0) ? 1 : -1))
    throw InvariantViolation(fmt::format("psi_m parity mismatch for d = {}, p = {}", d, p));
  for (std::int64_t a = 1; a <= D; ++a) {
    if (std::gcd(a, D) != 1) continue;
    if (s.chi_D(a) != kronecker(a, p) * s.psi_m(a))
      throw InvariantViolation(fmt::format("split identity fails at a = {} (d = {}, p = {})", a, d, p));
  }
  return s;
}

}  // namespace supercong
