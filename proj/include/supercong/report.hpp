#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "supercong/core_arith.hpp"
#include "supercong/rational.hpp"

namespace supercong {

enum class StatementId {
  AAC_CLASSICAL,
  THM1,
  COR_EXACT_DIV,
  SUPER_AACM_CRIT,
  LEHMER_THM2,
  LEHMER_DIFF,
  THM3,
  THM3_CORRECTED,
  SUPER_WILSON_CRIT,
  POWER_SUM_NONPRINCIPAL,
  POWER_SUM_PRINCIPAL,
  SUN_CONGRUENCE,
  PROOF_CHAIN,
};

/// CLI spelling, e.g. "thm1", "super-wilson".
std::string_view statement_name(StatementId id);
std::optional<StatementId> parse_statement(std::string_view name);

/// Criteria used contrapositively: a failing congruence is the expected,
/// clean outcome and never an error.
bool is_detector(StatementId id);

struct Instance {
  std::optional<std::int64_t> d;
  std::optional<std::int64_t> p;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> disc;  // character discriminant where relevant
  std::optional<std::int64_t> b;     // Sun's congruence offset
  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Verdict for one instance of one congruence. holds <=> v_p(lhs - rhs) >= depth.
struct CongruenceReport {
  StatementId statement{};
  Instance instance;
  Rational lhs;
  Rational rhs;
  int depth = 1;
  Valuation difference_valuation = Valuation::infinite();
  bool holds = false;
  bool advisory = false;  // computed and shown but excluded from gating
  std::string note;
  std::chrono::nanoseconds elapsed{0};
};

/// Fills valuation and verdict from lhs, rhs, depth and the instance prime.
CongruenceReport make_report(StatementId id, Instance instance, Rational lhs, Rational rhs, int depth);

/// Times a scope into report.elapsed.
class ReportTimer {
 public:
  ReportTimer() : start_(std::chrono::steady_clock::now()) {}
  void stamp(CongruenceReport& r) const {
    r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace supercong
