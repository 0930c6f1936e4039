#include "supercong/congruence_suite.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <functional>
#include <tuple>

#include "supercong/bernoulli.hpp"
#include "supercong/characters.hpp"
#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"
#include "supercong/padic_lfun.hpp"

namespace supercong {

namespace {

void require_prime_above(std::int64_t p, std::int64_t bound) {
  if (p <= bound || !is_prime(p)) throw InputError(fmt::format("expected a prime p > {}, got {}", bound, p));
}

void require_field_instance(const FieldInvariants& inv, std::int64_t p) {
  if (inv.d <= 5) throw InputError(fmt::format("d = {} must exceed 5", inv.d));
  require_prime_above(p, 3);
  if (inv.d % p != 0) throw InputError(fmt::format("p = {} does not divide d = {}", p, inv.d));
}

Instance field_instance(const FieldInvariants& inv, std::int64_t p) {
  Instance i;
  i.d = inv.d;
  i.p = p;
  return i;
}

Instance prime_instance(std::int64_t p, std::optional<std::int64_t> k = std::nullopt) {
  Instance i;
  i.p = p;
  i.k = k;
  return i;
}

FieldInvariants invariants_for(std::int64_t d) {
  if (d <= 5) throw InputError(fmt::format("d = {} must exceed 5", d));
  if (!is_squarefree(d)) throw InputError(fmt::format("d = {} is not squarefree", d));
  return field_invariants(d, Parallelism::serial);
}

Rational big(std::int64_t v) { return Rational(static_cast<long>(v)); }

int to_int(std::int64_t v) {
  if (v > 1'000'000 || v < -1'000'000) throw InputError(fmt::format("index {} out of range", v));
  return static_cast<int>(v);
}

CongruenceReport theorem3_impl(StatementId id, std::int64_t p, std::int64_t k, bool corrected) {
  ReportTimer timer;
  require_prime_above(p, 5);
  if (k < 1) throw InputError("k must be >= 1");
  const int n = to_int(p - 1);
  const Rational W = wilson_quotient(p);
  const Rational R = Rational(1) - Rational(1, p);
  const Rational kr = big(k);
  const Rational lhs = kr * big(p - 1) * W * (Rational(1) + big(p) * W / Rational(2));
  const Rational b1 = bernoulli(n);
  const Rational b2 = bernoulli(2 * n);
  const Rational c = corrected ? kr * kr : kr;
  const Rational rhs = -bernoulli(to_int(k) * n) + R + c * (b2 - b1) - c / Rational(2) * (b2 - R);
  auto r = make_report(id, prime_instance(p, k), lhs, rhs, 2);
  timer.stamp(r);
  return r;
}

}  // namespace

CongruenceReport check_aac_classical(std::int64_t p) {
  ReportTimer timer;
  if (!is_prime(p) || p % 4 != 1) throw InputError(fmt::format("p = {} must be a prime = 1 mod 4", p));
  const FieldInvariants inv = field_invariants(p, Parallelism::serial);
  const int r = to_int((p - 1) / 2);
  const Rational lhs = Rational(2 * inv.h) * Rational(inv.u) / Rational(inv.t);
  const Rational rhs = -bernoulli(r) / Rational(r);
  auto rep = make_report(StatementId::AAC_CLASSICAL, field_instance(inv, p), lhs, rhs, 1);
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_theorem1(const FieldInvariants& inv, std::int64_t p) {
  ReportTimer timer;
  require_field_instance(inv, p);
  const CharacterSplit s = split_character(inv.d, p);
  const int r = to_int(s.r());
  const Rational lhs = Rational(2) * lp1_via_class_number(inv, p);
  const Rational euler = Rational(1) - Rational(s.psi_m(p)) * pow(big(p), r - 1);
  const Rational rhs = Rational(-3) * euler * gen_bernoulli(r, s.psi_m) / Rational(r) +
                       gen_bernoulli(3 * r, s.psi_m) / Rational(3 * r);
  auto rep = make_report(StatementId::THM1, field_instance(inv, p), lhs, rhs, 2);
  if (p == 5) {
    rep.advisory = true;
    rep.note = "p = 5: outside the verified range, advisory";
  }
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_theorem1(std::int64_t d, std::int64_t p) {
  require_prime_above(p, 3);
  return check_theorem1(invariants_for(d), p);
}

CongruenceReport check_corollary_exact_division(const FieldInvariants& inv, std::int64_t p) {
  ReportTimer timer;
  require_field_instance(inv, p);
  require_prime_above(p, 5);
  const Valuation v = vp(inv.u, p);
  if (v != Valuation(1))
    throw PreconditionError(fmt::format("v_{}(u) = {} for d = {}, not 1", p, v.str(), inv.d));
  const CharacterSplit s = split_character(inv.d, p);
  const int r = to_int(s.r());
  const Rational pr = big(p);
  const Rational lhs = Rational(2 * inv.h) / Rational(inv.delta) * Rational(inv.u) / (pr * Rational(inv.t));
  const Rational rhs =
      (Rational(3) * gen_bernoulli(r, s.psi_m) - gen_bernoulli(3 * r, s.psi_m) / Rational(3)) / pr;
  auto rep = make_report(StatementId::COR_EXACT_DIV, field_instance(inv, p), lhs, rhs, 1);
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_corollary_exact_division(std::int64_t d, std::int64_t p) {
  require_prime_above(p, 5);
  return check_corollary_exact_division(invariants_for(d), p);
}

CongruenceReport check_super_aacm_criterion(std::int64_t d, std::int64_t p) {
  ReportTimer timer;
  require_prime_above(p, 5);
  if (d <= 5 || !is_squarefree(d)) throw InputError(fmt::format("d = {} must be squarefree and > 5", d));
  if (d % p != 0) throw InputError(fmt::format("p = {} does not divide d = {}", p, d));
  const CharacterSplit s = split_character(d, p);
  const int r = to_int(s.r());
  Instance inst;
  inst.d = d;
  inst.p = p;
  auto rep = make_report(StatementId::SUPER_AACM_CRIT, inst, Rational(9) * gen_bernoulli(r, s.psi_m),
                         gen_bernoulli(3 * r, s.psi_m), 2);
  rep.note = rep.holds ? "criterion holds: p may divide u to order >= 2" : "p^2 does not divide u";
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_lehmer_thm2(std::int64_t p, std::int64_t k) {
  ReportTimer timer;
  require_prime_above(p, 2);
  if (k < 1) throw InputError("k must be >= 1");
  const Rational lhs = bernoulli(to_int(k * (p - 1))) + Rational(1, p) - Rational(1);
  const Rational rhs = big(k) * wilson_quotient(p);
  auto rep = make_report(StatementId::LEHMER_THM2, prime_instance(p, k), lhs, rhs, 1);
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_lehmer_diff(std::int64_t p) {
  ReportTimer timer;
  require_prime_above(p, 2);
  const int n = to_int(p - 1);
  auto rep = make_report(StatementId::LEHMER_DIFF, prime_instance(p), bernoulli(2 * n) - bernoulli(n),
                         wilson_quotient(p), 1);
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_theorem3(std::int64_t p, std::int64_t k) {
  return theorem3_impl(StatementId::THM3, p, k, false);
}

CongruenceReport check_theorem3_corrected(std::int64_t p, std::int64_t k) {
  return theorem3_impl(StatementId::THM3_CORRECTED, p, k, true);
}

CongruenceReport check_super_wilson_criterion(std::int64_t p) {
  ReportTimer timer;
  require_prime_above(p, 3);
  const int n = to_int(p - 1);
  const Rational R = Rational(1) - Rational(1, p);
  auto rep = make_report(StatementId::SUPER_WILSON_CRIT, prime_instance(p), Rational(4) * (bernoulli(n) - R),
                         bernoulli(2 * n) - R, 2);
  const bool wilson = vp(wilson_quotient(p), p).at_least(1);
  rep.note = fmt::format("{}; {}", wilson ? "Wilson prime" : "not a Wilson prime",
                         rep.holds ? "criterion holds, needs attention" : "not super-Wilson");
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_proof_chain(const FieldInvariants& inv, std::int64_t p) {
  ReportTimer timer;
  require_field_instance(inv, p);
  const CharacterSplit s = split_character(inv.d, p);
  const int r = to_int(s.r());
  const Rational lhs = lp1_via_class_number(inv, p);
  const Rational rhs = lp_interp_value(r, s) - Rational(r) * a1_closed_quadratic(s);
  auto rep = make_report(StatementId::PROOF_CHAIN, field_instance(inv, p), lhs, rhs, 2);
  if (p == 5) rep.advisory = true;
  timer.stamp(rep);
  return rep;
}

CongruenceReport check_proof_chain(std::int64_t d, std::int64_t p) {
  require_prime_above(p, 3);
  return check_proof_chain(invariants_for(d), p);
}

CongruenceReport run_check(StatementId id, const Instance& inst) {
  auto need = [&](const std::optional<std::int64_t>& v, const char* name) {
    if (!v) throw InputError(fmt::format("{} needs --{}", statement_name(id), name));
    return *v;
  };
  switch (id) {
    case StatementId::AAC_CLASSICAL:
      return check_aac_classical(need(inst.p, "p"));
    case StatementId::THM1:
      return check_theorem1(need(inst.d, "d"), need(inst.p, "p"));
    case StatementId::COR_EXACT_DIV:
      return check_corollary_exact_division(need(inst.d, "d"), need(inst.p, "p"));
    case StatementId::SUPER_AACM_CRIT:
      return check_super_aacm_criterion(need(inst.d, "d"), need(inst.p, "p"));
    case StatementId::LEHMER_THM2:
      return check_lehmer_thm2(need(inst.p, "p"), need(inst.k, "k"));
    case StatementId::LEHMER_DIFF:
      return check_lehmer_diff(need(inst.p, "p"));
    case StatementId::THM3:
      return check_theorem3(need(inst.p, "p"), need(inst.k, "k"));
    case StatementId::THM3_CORRECTED:
      return check_theorem3_corrected(need(inst.p, "p"), need(inst.k, "k"));
    case StatementId::SUPER_WILSON_CRIT:
      return check_super_wilson_criterion(need(inst.p, "p"));
    case StatementId::POWER_SUM_NONPRINCIPAL:
      return lemma_power_sum_nonprincipal(to_int(need(inst.k, "k")), QuadChar::from_discriminant(need(inst.disc, "disc")),
                                          need(inst.p, "p"));
    case StatementId::POWER_SUM_PRINCIPAL:
      return lemma_power_sum_principal(to_int(need(inst.k, "k")), need(inst.p, "p"));
    case StatementId::SUN_CONGRUENCE: {
      const QuadChar chi = inst.disc && *inst.disc != 1 ? QuadChar::from_discriminant(*inst.disc) : QuadChar::principal();
      return sun_congruence_check(to_int(need(inst.b, "b")), to_int(need(inst.k, "k")), chi, need(inst.p, "p"));
    }
    case StatementId::PROOF_CHAIN:
      return check_proof_chain(need(inst.d, "d"), need(inst.p, "p"));
  }
  throw InputError("unknown statement");
}

// ---------------------------------------------------------------------------
// scanning

namespace {

enum class GridKind { field, prime, prime_k };

GridKind grid_kind(StatementId id) {
  switch (id) {
    case StatementId::THM1:
    case StatementId::COR_EXACT_DIV:
    case StatementId::SUPER_AACM_CRIT:
    case StatementId::PROOF_CHAIN:
      return GridKind::field;
    case StatementId::AAC_CLASSICAL:
    case StatementId::LEHMER_DIFF:
    case StatementId::SUPER_WILSON_CRIT:
      return GridKind::prime;
    case StatementId::LEHMER_THM2:
    case StatementId::THM3:
    case StatementId::THM3_CORRECTED:
    case StatementId::POWER_SUM_PRINCIPAL:
      return GridKind::prime_k;
    default:
      throw InputError(fmt::format("statement {} cannot be scanned (it needs a character)", statement_name(id)));
  }
}

// Bernoulli indices above this need --long-running.
constexpr std::int64_t kLongIndex = 5000;

struct Task {
  std::int64_t d = 0;  // field grids: one task per d, covering all its primes
  std::vector<std::int64_t> primes;
  std::int64_t p = 0;
  std::int64_t k = 0;
};

struct Outcome {
  std::vector<CongruenceReport> reports;
  std::vector<ScanError> errors;
  std::size_t skipped = 0;
};

std::int64_t effective_p_min(const ScanConfig& cfg) {
  return (cfg.include_p5 && cfg.p_min > 5) ? 5 : cfg.p_min;
}

std::vector<Task> build_tasks(const ScanConfig& cfg) {
  std::vector<Task> tasks;
  const std::int64_t p_lo = effective_p_min(cfg);
  switch (grid_kind(cfg.statement)) {
    case GridKind::field:
      for (std::int64_t d = std::max<std::int64_t>(cfg.d_min, 6); d <= cfg.d_max; ++d) {
        if (!is_squarefree(d)) continue;
        Task t;
        t.d = d;
        for (auto [q, e] : factorize(d)) {
          (void)e;
          if (q < 5 || q < p_lo || (cfg.p_max > 0 && q > cfg.p_max)) continue;
          const bool p5_ok = cfg.statement == StatementId::THM1 || cfg.statement == StatementId::PROOF_CHAIN;
          if (q == 5 && !p5_ok) continue;
          t.primes.push_back(q);
        }
        if (!t.primes.empty()) tasks.push_back(std::move(t));
      }
      break;
    case GridKind::prime:
    case GridKind::prime_k:
      for (std::int64_t p = std::max<std::int64_t>(p_lo, 2); p <= cfg.p_max; ++p) {
        if (!is_prime(p)) continue;
        if (cfg.statement == StatementId::AAC_CLASSICAL && p % 4 != 1) continue;
        if (grid_kind(cfg.statement) == GridKind::prime) {
          tasks.push_back({0, {}, p, 0});
          continue;
        }
        for (std::int64_t k = cfg.k_min; k <= cfg.k_max; ++k) tasks.push_back({0, {}, p, k});
      }
      break;
  }
  return tasks;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ScopeError*>(&e)) return "scope";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "invariant";
  return "input";
}

std::int64_t bernoulli_index(const ScanConfig& cfg, const Task& t) {
  switch (cfg.statement) {
    case StatementId::LEHMER_THM2:
    case StatementId::THM3:
    case StatementId::THM3_CORRECTED:
      return std::max(t.k, std::int64_t{2}) * (t.p - 1);
    case StatementId::LEHMER_DIFF:
    case StatementId::SUPER_WILSON_CRIT:
      return 2 * (t.p - 1);
    case StatementId::POWER_SUM_PRINCIPAL:
      return t.k;
    default:
      return (t.p - 1) / 2;
  }
}

void run_one(const ScanConfig& cfg, StatementId id, const Instance& inst, Outcome& out,
             const std::function<CongruenceReport()>& fn) {
  try {
    out.reports.push_back(fn());
  } catch (const PreconditionError&) {
    ++out.skipped;
  } catch (const std::exception& e) {
    out.errors.push_back({id, inst, error_kind(e), e.what()});
  }
  (void)cfg;
}

Outcome run_task(const ScanConfig& cfg, const Task& t) {
  Outcome out;
  const StatementId id = cfg.statement;
  if (t.d == 0) {
    Instance inst = prime_instance(t.p, t.k ? std::optional<std::int64_t>(t.k) : std::nullopt);
    if (!cfg.long_running && bernoulli_index(cfg, t) > kLongIndex) {
      ++out.skipped;
      return out;
    }
    if (id == StatementId::POWER_SUM_PRINCIPAL && (t.k < 3 || t.k >= t.p * (t.p - 1) || t.p <= 3)) {
      ++out.skipped;
      return out;
    }
    run_one(cfg, id, inst, out, [&] { return run_check(id, inst); });
    return out;
  }
  std::optional<FieldInvariants> inv;
  try {
    if (id != StatementId::SUPER_AACM_CRIT) inv = field_invariants(t.d, Parallelism::serial);
  } catch (const std::exception& e) {
    for (std::int64_t p : t.primes) {
      Instance inst;
      inst.d = t.d;
      inst.p = p;
      out.errors.push_back({id, inst, error_kind(e), e.what()});
    }
    return out;
  }
  for (std::int64_t p : t.primes) {
    Instance inst;
    inst.d = t.d;
    inst.p = p;
    run_one(cfg, id, inst, out, [&] {
      CongruenceReport r;
      switch (id) {
        case StatementId::THM1:
          r = check_theorem1(*inv, p);
          break;
        case StatementId::COR_EXACT_DIV:
          r = check_corollary_exact_division(*inv, p);
          break;
        case StatementId::PROOF_CHAIN:
          r = check_proof_chain(*inv, p);
          break;
        default:
          r = check_super_aacm_criterion(t.d, p);
          break;
      }
      if (p == 5) r.advisory = true;
      if (inv) {
        const Valuation v = vp(inv->u, p);
        if (v.at_least(cfg.kappa)) {
          if (!r.note.empty()) r.note += "; ";
          r.note += fmt::format("alert: v_{}(u) = {} >= kappa = {}", p, v.str(), cfg.kappa);
        }
      }
      return r;
    });
  }
  return out;
}

auto instance_key(const Instance& i) {
  return std::make_tuple(i.d.value_or(0), i.p.value_or(0), i.k.value_or(0), i.disc.value_or(0), i.b.value_or(0));
}

ScanResult merge(std::vector<Outcome>& parts) {
  ScanResult res;
  for (auto& o : parts) {
    for (auto& r : o.reports) res.reports.push_back(std::move(r));
    for (auto& e : o.errors) res.errors.push_back(std::move(e));
    res.skipped += o.skipped;
  }
  std::stable_sort(res.reports.begin(), res.reports.end(), [](const auto& a, const auto& b) {
    return instance_key(a.instance) < instance_key(b.instance);
  });
  std::stable_sort(res.errors.begin(), res.errors.end(), [](const auto& a, const auto& b) {
    return instance_key(a.instance) < instance_key(b.instance);
  });
  return res;
}

}  // namespace

void validate(const ScanConfig& cfg) {
  grid_kind(cfg.statement);
  if (cfg.kappa < 2) throw InputError(fmt::format("kappa must be >= 2, got {}", cfg.kappa));
  if (cfg.jobs < 0) throw InputError("jobs must be >= 0");
  if (cfg.k_min < 1) throw InputError("k-min must be >= 1");
}

ScanResult scan_serial(const ScanConfig& cfg) {
  validate(cfg);
  const auto tasks = build_tasks(cfg);
  std::vector<Outcome> parts;
  parts.reserve(tasks.size());
  for (const auto& t : tasks) parts.push_back(run_task(cfg, t));
  return merge(parts);
}

ScanResult scan(const ScanConfig& cfg) {
  validate(cfg);
  const auto tasks = build_tasks(cfg);
  std::vector<Outcome> parts(tasks.size());
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) parts[static_cast<std::size_t>(i)] = run_task(cfg, tasks[static_cast<std::size_t>(i)]);
  return merge(parts);
}

}  // namespace supercong
