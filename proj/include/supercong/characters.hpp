#pragma once

// Quadratic Dirichlet characters, evaluated through the Kronecker symbol,
// and the factorization chi_D = (./p) psi_m of a real quadratic character
// whose conductor is divisible by p.

#include <cstdint>

namespace supercong {

/// Kronecker symbol (a/n) with the usual conventions at n = 2 and n = -1.
int kronecker(std::int64_t a, std::int64_t n);

/// Legendre symbol for an odd prime p; throws InputError otherwise.
int legendre(std::int64_t a, std::int64_t p);

bool is_fundamental_discriminant(std::int64_t disc);

/// A primitive quadratic character, or the principal character (sentinel
/// discriminant 1, conductor 1).
class QuadChar {
 public:
  static QuadChar principal() { return QuadChar(1); }
  /// Throws InputError unless disc is a fundamental discriminant.
  static QuadChar from_discriminant(std::int64_t disc);

  [[nodiscard]] std::int64_t discriminant() const { return disc_; }
  [[nodiscard]] std::int64_t conductor() const { return disc_ < 0 ? -disc_ : disc_; }
  [[nodiscard]] bool is_principal() const { return disc_ == 1; }
  /// chi(-1): +1 for real (positive discriminant) characters, -1 otherwise.
  [[nodiscard]] int parity() const { return disc_ > 0 ? 1 : -1; }

  /// chi(a), zero when gcd(a, conductor) > 1.
  [[nodiscard]] int operator()(std::int64_t a) const {
    return disc_ == 1 ? 1 : kronecker(disc_, a);
  }

  friend bool operator==(const QuadChar&, const QuadChar&) = default;

 private:
  explicit QuadChar(std::int64_t disc) : disc_(disc) {}
  std::int64_t disc_;
};

/// p* = (-1)^((p-1)/2) p
std::int64_t p_star(std::int64_t p);

struct CharacterSplit {
  std::int64_t d;        // squarefree, d = p m
  std::int64_t p;
  std::int64_t m;
  int delta;             // 1 if d = 1 mod 4, else 2
  std::int64_t D;        // delta^2 d
  QuadChar chi_D;
  QuadChar psi_m;        // discriminant D / p*, conductor delta^2 m
  [[nodiscard]] std::int64_t r() const { return (p - 1) / 2; }
};

/// Builds the split for squarefree d = p m with p > 3, p | d. The pointwise
/// identity chi_D(a) = (a/p) psi_m(a) is checked for every a in [1, D]
/// coprime to D; a mismatch throws InvariantViolation.
CharacterSplit split_character(std::int64_t d, std::int64_t p);

}  // namespace supercong
