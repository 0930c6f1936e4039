#include "supercong/bernoulli.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <mutex>

#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"

namespace supercong {

BernoulliCache& BernoulliCache::shared() {
  static BernoulliCache cache;
  return cache;
}

void BernoulliCache::extend_plain(int n) {
  int first_missing = 0;
  while (plain_.count(first_missing)) ++first_missing;
  if (first_missing > n) return;

  // Every denominator of B_j, j <= n, divides the product of primes q <= n + 1
  // (von Staudt-Clausen), so A_j = L * B_j are integers and
  // sum_{j<m} C(m+1, j) A_j = -(m+1) A_m.
  BigInt L = 1;
  for (std::int64_t q = 2; q <= n + 1; ++q)
    if (is_prime(q)) L *= static_cast<long>(q);

  std::vector<BigInt> A(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j < first_missing; ++j) {
    const Rational& b = plain_.at(j);
    BigInt scale;
    if (!mpz_divisible_p(L.get_mpz_t(), b.den().get_mpz_t()))
      throw InvariantViolation(fmt::format("stored B_{} has a denominator outside von Staudt-Clausen", j));
    mpz_divexact(scale.get_mpz_t(), L.get_mpz_t(), b.den().get_mpz_t());
    A[static_cast<std::size_t>(j)] = b.num() * scale;
  }
  for (int m = first_missing; m <= n; ++m) {
    if (m >= 3 && (m & 1)) {
      A[static_cast<std::size_t>(m)] = 0;
    } else if (m == 0) {
      A[0] = L;
    } else {
      BigInt sum = 0;
      BigInt c = 1;  // C(m+1, j)
      for (int j = 0; j < m; ++j) {
        if (!(j >= 3 && (j & 1))) sum += c * A[static_cast<std::size_t>(j)];
        c *= static_cast<unsigned long>(m + 1 - j);
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(j + 1));
      }
      BigInt am = -sum;
      if (!mpz_divisible_ui_p(am.get_mpz_t(), static_cast<unsigned long>(m + 1)))
        throw InvariantViolation(fmt::format("Bernoulli recurrence lost integrality at n = {}", m));
      mpz_divexact_ui(am.get_mpz_t(), am.get_mpz_t(), static_cast<unsigned long>(m + 1));
      A[static_cast<std::size_t>(m)] = am;
    }
    plain_.emplace(m, Rational(A[static_cast<std::size_t>(m)], L));
    ++computed_;
  }
}

Rational BernoulliCache::bernoulli(int n) {
  if (n < 0) throw InputError("Bernoulli index must be >= 0");
  {
    std::shared_lock lock(mu_);
    auto it = plain_.find(n);
    if (it != plain_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  extend_plain(n);
  return plain_.at(n);
}

Rational BernoulliCache::generalized(int n, const QuadChar& chi, Parallelism mode) {
  if (n < 0) throw InputError("Bernoulli index must be >= 0");
  if (chi.is_principal()) return n == 1 ? Rational(1, 2) : bernoulli(n);
  const auto key = std::make_pair(chi.discriminant(), n);
  {
    std::shared_lock lock(mu_);
    auto it = generalized_.find(key);
    if (it != generalized_.end()) return it->second;
  }
  std::vector<Rational> B(static_cast<std::size_t>(n) + 1);
  bernoulli(n);
  {
    std::shared_lock lock(mu_);
    for (int j = 0; j <= n; ++j) B[static_cast<std::size_t>(j)] = plain_.at(j);
  }
  // B_{n,chi} = f^(n-1) sum_a chi(a) B_n(a/f)
  //           = sum_j C(n, j) B_j f^(j-1) S_{n-j},  S_k = sum_a chi(a) a^k
  const auto S = character_power_sums(chi, n, mode);
  const BigInt f(static_cast<long>(chi.conductor()));
  Rational acc;
  BigInt c = 1;
  BigInt fj = 1;
  for (int j = 0; j <= n; ++j) {
    const Rational& bj = B[static_cast<std::size_t>(j)];
    if (!bj.is_zero()) acc += Rational(c * fj * S[static_cast<std::size_t>(n - j)]) * bj;
    c *= static_cast<unsigned long>(n - j);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(j + 1));
    fj *= f;
  }
  Rational value = acc / Rational(f);
  std::unique_lock lock(mu_);
  auto [it, inserted] = generalized_.emplace(key, value);
  if (inserted) ++computed_;
  return it->second;
}

void BernoulliCache::insert(const Entry& e) {
  std::unique_lock lock(mu_);
  if (e.disc)
    generalized_[{*e.disc, e.n}] = e.value;
  else
    plain_[e.n] = e.value;
}

std::vector<BernoulliCache::Entry> BernoulliCache::snapshot() const {
  std::shared_lock lock(mu_);
  std::vector<Entry> out;
  out.reserve(plain_.size() + generalized_.size());
  for (const auto& [n, v] : plain_) out.push_back({n, std::nullopt, v});
  for (const auto& [key, v] : generalized_) out.push_back({key.second, key.first, v});
  return out;
}

std::size_t BernoulliCache::size() const {
  std::shared_lock lock(mu_);
  return plain_.size() + generalized_.size();
}

std::uint64_t BernoulliCache::computed_count() const {
  std::shared_lock lock(mu_);
  return computed_;
}

void BernoulliCache::clear() {
  std::unique_lock lock(mu_);
  plain_.clear();
  generalized_.clear();
  computed_ = 0;
}

Rational bernoulli(int n) { return BernoulliCache::shared().bernoulli(n); }

Rational gen_bernoulli(int n, const QuadChar& chi) { return BernoulliCache::shared().generalized(n, chi); }

BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt c = 1;
  for (long j = 0; j < k; ++j) {
    c *= static_cast<unsigned long>(n - j);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(j + 1));
  }
  return c;
}

Rational bernoulli_poly(int n, const Rational& x) {
  if (n < 0) throw InputError("Bernoulli polynomial degree must be >= 0");
  // Horner in x over coefficients C(n, j) B_j of x^(n-j)
  Rational acc;
  BigInt c = 1;
  for (int j = 0; j <= n; ++j) {
    acc = acc * x + Rational(c) * bernoulli(j);
    c *= static_cast<unsigned long>(n - j);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(j + 1));
  }
  return acc;
}

std::vector<BigInt> character_power_sums(const QuadChar& chi, int k_max, Parallelism mode) {
  const std::int64_t f = chi.conductor();
  const auto len = static_cast<std::size_t>(k_max) + 1;
  std::vector<BigInt> total(len, BigInt(0));
  auto accumulate = [&](std::int64_t a, std::vector<BigInt>& s) {
    const int c = chi(a);
    if (c == 0) return;
    BigInt pw = 1;
    for (std::size_t k = 0; k < len; ++k) {
      if (c > 0)
        s[k] += pw;
      else
        s[k] -= pw;
      pw *= static_cast<long>(a);
    }
  };
  if (mode == Parallelism::serial) {
    for (std::int64_t a = 1; a <= f; ++a) accumulate(a, total);
    return total;
  }
#pragma omp parallel
  {
    std::vector<BigInt> local(len, BigInt(0));
#pragma omp for schedule(static)
    for (std::int64_t a = 1; a <= f; ++a) accumulate(a, local);
#pragma omp critical
    for (std::size_t k = 0; k < len; ++k) total[k] += local[k];
  }
  return total;
}

namespace {

void require_multiple_of_conductor(std::int64_t F, const QuadChar& chi) {
  if (F < 1 || F % chi.conductor() != 0)
    throw InputError(fmt::format("F = {} is not a positive multiple of the conductor {}", F, chi.conductor()));
}

void require_coprime_prime(std::int64_t p, const QuadChar& chi) {
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
  if (chi.conductor() % p == 0)
    throw InputError(fmt::format("p = {} divides the conductor {}", p, chi.conductor()));
}

BigInt raw_power_sum(int k, std::int64_t F, const QuadChar& chi, std::int64_t skip_multiples_of) {
  BigInt sum = 0;
  BigInt pw;
  for (std::int64_t a = 1; a <= F; ++a) {
    if (skip_multiples_of && a % skip_multiples_of == 0) continue;
    const int c = chi(a);
    if (c == 0) continue;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(k));
    if (c > 0)
      sum += pw;
    else
      sum -= pw;
  }
  return sum;
}

}  // namespace

Rational power_sum_direct(int k, std::int64_t F, const QuadChar& chi) {
  if (k < 0) throw InputError("power sum exponent must be >= 0");
  require_multiple_of_conductor(F, chi);
  return Rational(raw_power_sum(k, F, chi, 0), BigInt(static_cast<long>(F)));
}

Rational power_sum_restricted(int k, std::int64_t F, const QuadChar& chi, std::int64_t p) {
  if (k < 0) throw InputError("power sum exponent must be >= 0");
  require_multiple_of_conductor(F, chi);
  if (!is_prime(p)) throw InputError(fmt::format("{} is not prime", p));
  return Rational(raw_power_sum(k, F, chi, p), BigInt(static_cast<long>(F)));
}

Rational power_sum_closed(int k, std::int64_t F, const QuadChar& chi) {
  if (k < 0) throw InputError("power sum exponent must be >= 0");
  require_multiple_of_conductor(F, chi);
  Rational acc;
  const BigInt Fz(static_cast<long>(F));
  BigInt c = 1;  // C(k+1, j)
  for (int j = 0; j <= k; ++j) {
    BigInt fp;
    mpz_pow_ui(fp.get_mpz_t(), Fz.get_mpz_t(), static_cast<unsigned long>(k - j));
    acc += Rational(c * fp) * gen_bernoulli(j, chi);
    c *= static_cast<unsigned long>(k + 1 - j);
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(j + 1));
  }
  return acc / Rational(k + 1);
}

bool carlitz_check(int n, const QuadChar& chi, std::int64_t p) {
  if (chi.is_principal()) throw InputError("Carlitz integrality needs a non-principal character");
  if (n < 1) throw InputError("Carlitz integrality needs n >= 1");
  require_coprime_prime(p, chi);
  return is_p_integral(gen_bernoulli(n, chi) / Rational(n), p);
}

CongruenceReport lemma_power_sum_nonprincipal(int k, const QuadChar& chi, std::int64_t p, LemmaReading reading) {
  ReportTimer timer;
  if (chi.is_principal()) throw InputError("non-principal power-sum lemma needs a non-principal character");
  if (p == 2) throw InputError("power-sum lemma needs an odd prime");
  require_coprime_prime(p, chi);
  if (k < 3) throw InputError("power-sum lemma needs k >= 3");
  const std::int64_t F = p * chi.conductor();
  const Rational Fr(static_cast<long>(F));
  const Rational P = power_sum_direct(k, F, chi);
  const bool same_parity = chi.parity() == ((k % 2 == 0) ? 1 : -1);
  Rational rhs;
  std::string note;
  if (same_parity && chi.parity() == -1 && k == 3) {
    const Rational scale = reading == LemmaReading::corrected ? Fr * Fr : Fr;
    rhs = gen_bernoulli(3, chi) + scale * gen_bernoulli(1, chi);
    note = "case (a), odd k = 3: exact identity";
  } else if (same_parity) {
    rhs = gen_bernoulli(k, chi);
    note = "case (a)";
  } else {
    const Rational scale = reading == LemmaReading::corrected ? Rational(k) * Fr : Fr;
    rhs = scale * gen_bernoulli(k - 1, chi) / Rational(2);
    note = "case (b)";
  }
  if (reading == LemmaReading::printed) note += ", printed reading";
  Instance inst;
  inst.p = p;
  inst.k = k;
  inst.disc = chi.discriminant();
  auto r = make_report(StatementId::POWER_SUM_NONPRINCIPAL, inst, P, rhs, 2);
  r.note = note;
  timer.stamp(r);
  return r;
}

CongruenceReport lemma_power_sum_principal(int k, std::int64_t p) {
  ReportTimer timer;
  if (p <= 3 || !is_prime(p)) throw InputError(fmt::format("principal power-sum lemma needs prime p > 3, got {}", p));
  if (k < 3 || static_cast<std::int64_t>(k) >= p * (p - 1))
    throw InputError(fmt::format("principal power-sum lemma needs 3 <= k < p(p-1), got k = {}", k));
  const Rational Fr(static_cast<long>(p));
  const Rational P = power_sum_direct(k, p, QuadChar::principal());
  Rational lhs = P;
  Rational rhs;
  std::string note;
  if (k % (p - 1) == 0) {
    lhs = P + Rational(1) / Fr;
    rhs = bernoulli(k) + Rational(1) / Fr;
    note = "case (a)";
  } else if (k % 2 == 0) {
    rhs = bernoulli(k) + Fr * Fr * Rational(static_cast<long>(k) * (k - 1)) * bernoulli(k - 2) / Rational(6);
    note = "case (b)";
  } else {
    rhs = Fr * Rational(k) * bernoulli(k - 1) / Rational(2);
    note = "case (c)";
  }
  Instance inst;
  inst.p = p;
  inst.k = k;
  auto r = make_report(StatementId::POWER_SUM_PRINCIPAL, inst, lhs, rhs, 2);
  r.note = note;
  timer.stamp(r);
  return r;
}

CongruenceReport sun_congruence_check(int b, int k, const QuadChar& chi, std::int64_t p) {
  ReportTimer timer;
  require_coprime_prime(p, chi);
  if (b < 1 || k < 1) throw InputError("Sun's congruence needs b >= 1 and k >= 1");
  if (b % (p - 1) == 0) throw InputError(fmt::format("(p-1) = {} divides b = {}", p - 1, b));
  const int p1 = static_cast<int>(p - 1);
  const int big = k * p1 + b;
  const Rational lhs = gen_bernoulli(big, chi) / Rational(big);
  const Rational euler = Rational(1) - Rational(chi(p)) * pow(Rational(static_cast<long>(p)), b - 1);
  const Rational rhs = Rational(k) * gen_bernoulli(p1 + b, chi) / Rational(p1 + b) -
                       Rational(k - 1) * euler * gen_bernoulli(b, chi) / Rational(b);
  Instance inst;
  inst.p = p;
  inst.k = k;
  inst.b = b;
  inst.disc = chi.discriminant();
  auto r = make_report(StatementId::SUN_CONGRUENCE, inst, lhs, rhs, 2);
  timer.stamp(r);
  return r;
}

}  // namespace supercong
