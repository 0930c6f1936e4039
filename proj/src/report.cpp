#include "supercong/report.hpp"

#include <array>
#include <utility>

#include "supercong/errors.hpp"

namespace supercong {

namespace {

constexpr std::array<std::pair<StatementId, std::string_view>, 13> kNames{{
    {StatementId::AAC_CLASSICAL, "aac"},
    {StatementId::THM1, "thm1"},
    {StatementId::COR_EXACT_DIV, "cor-exact-div"},
    {StatementId::SUPER_AACM_CRIT, "super-aacm"},
    {StatementId::LEHMER_THM2, "lehmer2"},
    {StatementId::LEHMER_DIFF, "lehmer-diff"},
    {StatementId::THM3, "thm3"},
    {StatementId::THM3_CORRECTED, "thm3-corrected"},
    {StatementId::SUPER_WILSON_CRIT, "super-wilson"},
    {StatementId::POWER_SUM_NONPRINCIPAL, "power-sum"},
    {StatementId::POWER_SUM_PRINCIPAL, "power-sum-principal"},
    {StatementId::SUN_CONGRUENCE, "sun"},
    {StatementId::PROOF_CHAIN, "proof-chain"},
}};

}  // namespace

std::string_view statement_name(StatementId id) {
  for (auto [k, v] : kNames)
    if (k == id) return v;
  return "unknown";
}

std::optional<StatementId> parse_statement(std::string_view name) {
  for (auto [k, v] : kNames)
    if (v == name) return k;
  return std::nullopt;
}

bool is_detector(StatementId id) {
  return id == StatementId::SUPER_AACM_CRIT || id == StatementId::SUPER_WILSON_CRIT;
}

CongruenceReport make_report(StatementId id, Instance instance, Rational lhs, Rational rhs, int depth) {
  if (!instance.p) throw InvariantViolation("report instance without a prime");
  CongruenceReport r;
  r.statement = id;
  r.instance = std::move(instance);
  r.depth = depth;
  r.difference_valuation = vp(lhs - rhs, *r.instance.p);
  r.holds = r.difference_valuation.at_least(depth);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

}  // namespace supercong
