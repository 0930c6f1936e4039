#include "supercong/quadratic_field.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"

namespace supercong {

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct Mat2 {
  BigInt a, b, c, d;
};

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

// Product of [[q_i, 1], [1, 0]] for i in [lo, hi), by binary splitting.
Mat2 convergent_product(const std::vector<std::int64_t>& q, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return {BigInt(q[lo]), BigInt(1), BigInt(1), BigInt(0)};
  std::size_t mid = lo + (hi - lo) / 2;
  return mul(convergent_product(q, lo, mid), convergent_product(q, mid, hi));
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<char> composite(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[j] = 1;
  }
  return out;
}

// Square root of n mod odd prime q (Tonelli-Shanks); n must be a residue.
std::uint64_t sqrt_mod(std::uint64_t n, std::uint64_t q) {
  n %= q;
  if (n == 0) return 0;
  if (q % 4 == 3) return pow_mod(n, (q + 1) / 4, q);
  std::uint64_t s = 0, e = q - 1;
  while ((e & 1) == 0) {
    e >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (pow_mod(z, (q - 1) / 2, q) != q - 1) ++z;
  std::uint64_t m = s, c = pow_mod(z, e, q), t = pow_mod(n, e, q), r = pow_mod(n, (e + 1) / 2, q);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, q);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, q);
    m = i;
    c = mul_mod(b, b, q);
    t = mul_mod(t, c, q);
    r = mul_mod(r, b, q);
  }
  return r;
}

// b runs over 2x (D = 0 mod 4) or 2x + 1 (D = 1 mod 4); (D - b^2)/4 is then
// C - x^2 - lin*x.
struct FormParams {
  std::int64_t D;
  std::int64_t s;  // floor(sqrt D)
  std::int64_t C;
  std::int64_t lin;
  std::int64_t x_lo;
  std::int64_t x_hi;  // inclusive

  explicit FormParams(std::int64_t disc) : D(disc), s(isqrt(disc)) {
    if (D % 4 == 0) {
      C = D / 4;
      lin = 0;
      x_lo = 1;
      x_hi = s / 2;
    } else {
      C = (D - 1) / 4;
      lin = 1;
      x_lo = 0;
      x_hi = (s - 1) / 2;
    }
  }
  [[nodiscard]] std::int64_t b_of(std::int64_t x) const { return 2 * x + lin; }
  [[nodiscard]] std::int64_t m_of(std::int64_t x) const { return C - x * x - lin * x; }
};

using Factorization = std::vector<std::pair<std::int64_t, int>>;

// Emits packed keys for every reduced (+-a, b) with a | m and a in the window.
void emit_forms(const FormParams& fp, std::int64_t b, const Factorization& fac,
                std::vector<std::uint64_t>& out) {
  const std::int64_t D = fp.D;
  auto in_window = [&](std::int64_t a) {
    std::int64_t hi = 2 * a + b;
    std::int64_t lo = 2 * a - b;
    return static_cast<__int128>(hi) * hi > D && (lo < 0 || static_cast<__int128>(lo) * lo < D);
  };
  auto pack = [](std::int64_t a, std::int64_t bb) {
    return (static_cast<std::uint64_t>(a + (std::int64_t{1} << 31)) << 32) |
           static_cast<std::uint64_t>(bb);
  };
  // 2a lies in (sqrt D - b, sqrt D + b)
  const std::int64_t a_max = (fp.s + b) / 2 + 1;
  std::vector<std::int64_t> divs{1};
  for (auto [q, e] : fac) {
    std::size_t n = divs.size();
    std::int64_t pw = 1;
    for (int i = 0; i < e; ++i) {
      pw *= q;
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t v = divs[j] * pw;
        if (v <= a_max) divs.push_back(v);
      }
    }
  }
  for (std::int64_t a : divs) {
    if (!in_window(a)) continue;
    out.push_back(pack(a, b));
    out.push_back(pack(-a, b));
  }
}

Factorization trial_factor(std::int64_t n) {
  Factorization f;
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    f.emplace_back(q, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

std::vector<std::uint64_t> reduced_keys_serial(const FormParams& fp) {
  std::vector<std::uint64_t> keys;
  for (std::int64_t x = fp.x_lo; x <= fp.x_hi; ++x) {
    std::int64_t m = fp.m_of(x);
    emit_forms(fp, fp.b_of(x), trial_factor(m), keys);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

struct SievePrime {
  std::int64_t q;
  std::int64_t roots[2];
  int nroots;
};

std::vector<SievePrime> sieve_primes(const FormParams& fp) {
  std::vector<SievePrime> out;
  const std::int64_t limit = isqrt(std::max<std::int64_t>(fp.C, 1)) + 1;
  for (std::int64_t q : primes_up_to(limit)) {
    SievePrime sp{q, {0, 0}, 0};
    if (q == 2) {
      for (std::int64_t x = 0; x < 2; ++x)
        if (((fp.C - x * x - fp.lin * x) % 2 + 2) % 2 == 0) sp.roots[sp.nroots++] = x;
    } else {
      auto uq = static_cast<std::uint64_t>(q);
      std::uint64_t Dq = static_cast<std::uint64_t>(fp.D % q);
      if (Dq != 0 && pow_mod(Dq, (uq - 1) / 2, uq) != 1) continue;
      std::uint64_t r = sqrt_mod(Dq, uq);
      std::uint64_t inv2 = (uq + 1) / 2;
      std::uint64_t lin = static_cast<std::uint64_t>(fp.lin);
      std::uint64_t x1 = mul_mod((r + uq - lin) % uq, inv2, uq);
      std::uint64_t x2 = mul_mod((2 * uq - r - lin) % uq, inv2, uq);
      sp.roots[sp.nroots++] = static_cast<std::int64_t>(x1);
      if (x2 != x1) sp.roots[sp.nroots++] = static_cast<std::int64_t>(x2);
    }
    if (sp.nroots) out.push_back(sp);
  }
  return out;
}

std::vector<std::uint64_t> reduced_keys_parallel(const FormParams& fp) {
  const auto primes = sieve_primes(fp);
  constexpr std::int64_t kBlock = 1 << 14;
  const std::int64_t span = fp.x_hi - fp.x_lo + 1;
  const std::int64_t nblocks = span <= 0 ? 0 : (span + kBlock - 1) / kBlock;
  std::vector<std::vector<std::uint64_t>> per_block(static_cast<std::size_t>(nblocks));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    const std::int64_t x0 = fp.x_lo + blk * kBlock;
    const std::int64_t x1 = std::min(fp.x_hi + 1, x0 + kBlock);
    const auto n = static_cast<std::size_t>(x1 - x0);
    std::vector<std::int64_t> rem(n);
    std::vector<Factorization> fac(n);
    for (std::size_t i = 0; i < n; ++i) rem[i] = fp.m_of(x0 + static_cast<std::int64_t>(i));
    for (const auto& sp : primes) {
      for (int k = 0; k < sp.nroots; ++k) {
        std::int64_t start = ((sp.roots[k] - x0) % sp.q + sp.q) % sp.q;
        for (auto i = static_cast<std::size_t>(start); i < n; i += static_cast<std::size_t>(sp.q)) {
          int e = 0;
          while (rem[i] % sp.q == 0) {
            rem[i] /= sp.q;
            ++e;
          }
          if (e) fac[i].emplace_back(sp.q, e);
        }
      }
    }
    auto& out = per_block[static_cast<std::size_t>(blk)];
    for (std::size_t i = 0; i < n; ++i) {
      if (rem[i] > 1) fac[i].emplace_back(rem[i], 1);
      std::sort(fac[i].begin(), fac[i].end());
      const std::int64_t x = x0 + static_cast<std::int64_t>(i);
      emit_forms(fp, fp.b_of(x), fac[i], out);
    }
  }
  std::vector<std::uint64_t> keys;
  for (auto& v : per_block) keys.insert(keys.end(), v.begin(), v.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<std::uint64_t> reduced_keys(std::int64_t D, Parallelism mode) {
  if (D <= 0) throw InputError("reduced forms need D > 0");
  FormParams fp(D);
  if (fp.s * fp.s == D) throw InputError(fmt::format("discriminant {} is a square", D));
  return mode == Parallelism::serial ? reduced_keys_serial(fp) : reduced_keys_parallel(fp);
}

QuadraticForm unpack(std::uint64_t key, std::int64_t D) {
  std::int64_t a = static_cast<std::int64_t>(key >> 32) - (std::int64_t{1} << 31);
  auto b = static_cast<std::int64_t>(key & 0xffffffffu);
  return {a, b, (b * b - D) / (4 * a)};
}

std::uint64_t pack_form(const QuadraticForm& f) {
  return (static_cast<std::uint64_t>(f.a + (std::int64_t{1} << 31)) << 32) |
         static_cast<std::uint64_t>(f.b);
}

}  // namespace

bool is_squarefree(std::int64_t n) {
  if (n < 1) throw InputError("is_squarefree needs n >= 1");
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw InputError("factorize needs n >= 1");
  return trial_factor(n);
}

DiscriminantShell invariants_shell(std::int64_t d) {
  if (d <= 1 || !is_squarefree(d)) throw InputError(fmt::format("{} is not a squarefree integer > 1", d));
  int delta = d % 4 == 1 ? 1 : 2;
  return {delta, static_cast<std::int64_t>(delta) * delta * d};
}

FundamentalUnit fundamental_unit(std::int64_t d) {
  const auto shell = invariants_shell(d);
  // x = (P + sqrt N) / Q with Q | N - P^2
  std::int64_t P = shell.delta == 1 ? 1 : 0;
  std::int64_t Q = shell.delta == 1 ? 2 : 1;
  const std::int64_t N = d;
  const std::int64_t s = isqrt(N);
  std::vector<std::int64_t> quotients;
  std::int64_t P1 = 0, Q1 = 0;
  for (std::int64_t k = 0;; ++k) {
    if (Q <= 0) throw InvariantViolation(fmt::format("non-positive Q in expansion of d = {}", d));
    const std::int64_t a = (P + s) / Q;
    const std::int64_t Pn = a * Q - P;
    const std::int64_t Qn = (N - Pn * Pn) / Q;
    if (k == 0) {
      P1 = Pn;
      Q1 = Qn;
    } else if (Pn == P1 && Qn == Q1) {
      break;  // x_{k+1} == x_1: period k, convergent index k - 1
    }
    quotients.push_back(a);
    P = Pn;
    Q = Qn;
  }
  const Mat2 m = convergent_product(quotients, 0, quotients.size());
  FundamentalUnit fu;
  fu.delta = shell.delta;
  fu.period = static_cast<std::int64_t>(quotients.size());
  const BigInt& pk = m.a;
  const BigInt& qk = m.c;
  BigInt norm4;
  if (shell.delta == 1) {
    fu.t = 2 * pk - qk;
    fu.u = qk;
    norm4 = fu.t * fu.t - BigInt(d) * fu.u * fu.u;  // 4 N(eps)
  } else {
    fu.t = pk;
    fu.u = qk;
    norm4 = 4 * (fu.t * fu.t - BigInt(d) * fu.u * fu.u);
  }
  if (norm4 == 4)
    fu.norm = 1;
  else if (norm4 == -4)
    fu.norm = -1;
  else
    throw InvariantViolation(fmt::format("unit norm check failed for d = {}", d));
  return fu;
}

bool is_reduced(const QuadraticForm& f, std::int64_t D) {
  if (f.b * f.b - 4 * static_cast<__int128>(f.a) * f.c != D) return false;
  if (f.b <= 0 || static_cast<__int128>(f.b) * f.b >= D) return false;
  const std::int64_t a2 = 2 * (f.a < 0 ? -f.a : f.a);
  const std::int64_t hi = a2 + f.b;
  const std::int64_t lo = a2 - f.b;
  return static_cast<__int128>(hi) * hi > D && (lo < 0 || static_cast<__int128>(lo) * lo < D);
}

namespace {

QuadraticForm rho_with_root(const QuadraticForm& f, std::int64_t D, std::int64_t s) {
  const std::int64_t c2 = 2 * (f.c < 0 ? -f.c : f.c);
  const std::int64_t bn = s - (((s + f.b) % c2) + c2) % c2;
  return {f.c, bn, (bn * bn - D) / (4 * f.c)};
}

}  // namespace

QuadraticForm rho(const QuadraticForm& f, std::int64_t D) { return rho_with_root(f, D, isqrt(D)); }

std::vector<QuadraticForm> reduced_forms(std::int64_t D, Parallelism mode) {
  std::vector<QuadraticForm> out;
  for (auto key : reduced_keys(D, mode)) out.push_back(unpack(key, D));
  std::sort(out.begin(), out.end());
  return out;
}

ClassNumber class_number_with_norm(std::int64_t d, int unit_norm, Parallelism mode) {
  const auto shell = invariants_shell(d);
  const std::int64_t D = shell.D;
  const auto keys = reduced_keys(D, mode);
  const std::int64_t s = isqrt(D);
  std::vector<char> seen(keys.size(), 0);
  std::int64_t cycles = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    QuadraticForm f = unpack(keys[i], D);
    for (;;) {
      auto it = std::lower_bound(keys.begin(), keys.end(), pack_form(f));
      if (it == keys.end() || *it != pack_form(f))
        throw InvariantViolation(fmt::format("rho left the reduced set at D = {}", D));
      auto j = static_cast<std::size_t>(it - keys.begin());
      if (seen[j]) {
        if (j != i) throw InvariantViolation(fmt::format("rho cycle merge at D = {}", D));
        break;
      }
      seen[j] = 1;
      f = rho_with_root(f, D, s);
    }
  }
  ClassNumber cn;
  cn.h_plus = cycles;
  cn.reduced_form_count = static_cast<std::int64_t>(keys.size());
  if (unit_norm == -1) {
    cn.h = cycles;
  } else {
    if (cycles % 2) throw InvariantViolation(fmt::format("odd narrow class number with N(eps) = +1, d = {}", d));
    cn.h = cycles / 2;
  }
  return cn;
}

ClassNumber class_number(std::int64_t d, Parallelism mode) {
  return class_number_with_norm(d, fundamental_unit(d).norm, mode);
}

FieldInvariants field_invariants(std::int64_t d, Parallelism mode) {
  const auto fu = fundamental_unit(d);
  const auto cn = class_number_with_norm(d, fu.norm, mode);
  FieldInvariants inv;
  inv.d = d;
  inv.delta = fu.delta;
  inv.D = static_cast<std::int64_t>(fu.delta) * fu.delta * d;
  inv.t = fu.t;
  inv.u = fu.u;
  inv.unit_norm = fu.norm;
  inv.h = cn.h;
  inv.h_plus = cn.h_plus;
  inv.cf_period = fu.period;
  return inv;
}

long vp_u(std::int64_t d, std::int64_t p) { return vp(fundamental_unit(d).u, p).clamped(); }

}  // namespace supercong
