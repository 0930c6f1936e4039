#pragma once

// Bernoulli numbers (x/(e^x - 1) convention, B_1 = -1/2), Bernoulli
// polynomials, generalized Bernoulli numbers B_{n,chi} for quadratic and
// principal characters, character power sums and the congruences built on
// them.

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "supercong/characters.hpp"
#include "supercong/quadratic_field.hpp"
#include "supercong/rational.hpp"
#include "supercong/report.hpp"

namespace supercong {

/// Thread-safe store of B_n and B_{n,chi}. Reads take a shared lock; the
/// plain-number table is extended under an exclusive lock so concurrent
/// requests never duplicate the recurrence.
class BernoulliCache {
 public:
  struct Entry {
    int n = 0;
    std::optional<std::int64_t> disc;  // nullopt: plain B_n
    Rational value;
  };

  /// Process-wide instance used by the free functions below.
  static BernoulliCache& shared();

  Rational bernoulli(int n);
  /// B_{n,chi}. For the principal character this is B_n except B_{1,chi0} = +1/2.
  Rational generalized(int n, const QuadChar& chi, Parallelism mode = Parallelism::openmp);

  /// Inserts a value without recomputation. Callers validate first.
  void insert(const Entry& e);
  [[nodiscard]] std::vector<Entry> snapshot() const;
  [[nodiscard]] std::size_t size() const;
  /// Number of values produced by computation rather than lookup.
  [[nodiscard]] std::uint64_t computed_count() const;
  void clear();

 private:
  void extend_plain(int n);  // exclusive lock held

  mutable std::shared_mutex mu_;
  std::map<int, Rational> plain_;
  std::map<std::pair<std::int64_t, int>, Rational> generalized_;
  std::uint64_t computed_ = 0;
};

Rational bernoulli(int n);
Rational bernoulli_poly(int n, const Rational& x);
Rational gen_bernoulli(int n, const QuadChar& chi);

/// C(n, k) by incremental multiplication.
BigInt binomial(long n, long k);

/// S_k = sum_{a=1}^{f} chi(a) a^k for k = 0..k_max (f = conductor).
std::vector<BigInt> character_power_sums(const QuadChar& chi, int k_max, Parallelism mode);

/// P(k, F, chi) = (1/F) sum_{a=1}^{F} chi(a) a^k.
Rational power_sum_direct(int k, std::int64_t F, const QuadChar& chi);
/// P'(k, F, chi): the same sum restricted to p not dividing a.
Rational power_sum_restricted(int k, std::int64_t F, const QuadChar& chi, std::int64_t p);
/// (1/(k+1)) sum_{j=0}^{k} C(k+1, j) B_{j,chi} F^{k-j}; equals power_sum_direct.
Rational power_sum_closed(int k, std::int64_t F, const QuadChar& chi);

/// B_{n,chi}/n is p-integral (Carlitz) for non-principal chi, p not dividing f.
bool carlitz_check(int n, const QuadChar& chi, std::int64_t p);

/// Which reading of the non-principal power-sum lemma to evaluate. The
/// printed one omits the factor k in case (b) and writes F B_{1,chi} for
/// F^2 B_{1,chi} in the odd k = 3 identity; it is kept for comparison.
enum class LemmaReading { corrected, printed };

/// Non-principal power sum mod p^2 with F = p f, k >= 3:
///   chi(-1) = (-1)^k: P = B_{k,chi} (exactly B_{3,chi} + F^2 B_{1,chi} when k = 3, chi odd)
///   otherwise:        P = k F B_{k-1,chi} / 2
CongruenceReport lemma_power_sum_nonprincipal(int k, const QuadChar& chi, std::int64_t p,
                                              LemmaReading reading = LemmaReading::corrected);

/// Principal power sum P(k, p) mod p^2 for p > 3, 3 <= k < p(p-1).
CongruenceReport lemma_power_sum_principal(int k, std::int64_t p);

/// B_{k(p-1)+b,chi}/(k(p-1)+b) = k B_{p-1+b,chi}/(p-1+b)
///     - (k-1)(1 - chi(p) p^(b-1)) B_{b,chi}/b   mod p^2, for (p-1) not dividing b.
CongruenceReport sun_congruence_check(int b, int k, const QuadChar& chi, std::int64_t p);

}  // namespace supercong
