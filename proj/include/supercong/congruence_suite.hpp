#pragma once

// Verifiers for the congruences relating class numbers, fundamental units,
// Bernoulli numbers and Wilson quotients, and a parallel scanner that runs
// them over grids of instances.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "supercong/quadratic_field.hpp"
#include "supercong/report.hpp"

namespace supercong {

/// 2hu/t = -B_r/r mod p for d = p = 1 mod 4, r = (p-1)/2.
CongruenceReport check_aac_classical(std::int64_t p);

/// (4h/delta)(u/t + (d/3)(u/t)^3)
///     = -3(1 - psi_m(p) p^(r-1)) B_{r,psi_m}/r + B_{3r,psi_m}/(3r)  mod p^2.
/// p = 5 is evaluated but the report is marked advisory.
CongruenceReport check_theorem1(std::int64_t d, std::int64_t p);
CongruenceReport check_theorem1(const FieldInvariants& inv, std::int64_t p);

/// (2h/delta)(u/(pt)) = (1/p)(3 B_{r,psi_m} - B_{3r,psi_m}/3) mod p, when
/// p exactly divides u. Other instances raise PreconditionError.
CongruenceReport check_corollary_exact_division(std::int64_t d, std::int64_t p);
CongruenceReport check_corollary_exact_division(const FieldInvariants& inv, std::int64_t p);

/// 9 B_{r,psi_m} = B_{3r,psi_m} mod p^2. Detector: when this fails, p^2 does
/// not divide u.
CongruenceReport check_super_aacm_criterion(std::int64_t d, std::int64_t p);

/// B_{k(p-1)} + 1/p - 1 = k W_p mod p.
CongruenceReport check_lehmer_thm2(std::int64_t p, std::int64_t k);
/// B_{2(p-1)} - B_{p-1} = W_p mod p.
CongruenceReport check_lehmer_diff(std::int64_t p);

/// k(p-1) W_p (1 + p W_p/2)
///     = -B_{k(p-1)} + R + k(B_{2(p-1)} - B_{p-1}) - (k/2)(B_{2(p-1)} - R)  mod p^2,
/// R = 1 - 1/p, exactly as stated.
CongruenceReport check_theorem3(std::int64_t p, std::int64_t k);
/// The same with k^2 in place of k in the last two terms, i.e.
/// -B_{k(p-1)} + R + (k^2/2)(B_{2(p-1)} - 2 B_{p-1} + R), which is what the
/// expansion of zeta*_p to first order gives.
CongruenceReport check_theorem3_corrected(std::int64_t p, std::int64_t k);

/// 4(B_{p-1} - R) = B_{2(p-1)} - R mod p^2. Detector: when this fails, p is
/// not a super-Wilson prime.
CongruenceReport check_super_wilson_criterion(std::int64_t p);

/// L_p(1, chi_D) from the class number formula against
/// L_p(1 - r, chi_D) - r a_1 with a_1 in closed form, mod p^2.
CongruenceReport check_proof_chain(std::int64_t d, std::int64_t p);
CongruenceReport check_proof_chain(const FieldInvariants& inv, std::int64_t p);

struct ScanConfig {
  StatementId statement = StatementId::THM1;
  std::int64_t d_min = 6;
  std::int64_t d_max = 0;
  std::int64_t p_min = 7;
  std::int64_t p_max = 0;
  std::int64_t k_min = 1;
  std::int64_t k_max = 1;
  bool include_p5 = false;
  bool long_running = false;
  /// Field instances with v_p(u) >= kappa get an alert note.
  int kappa = 2;
  /// OpenMP threads; 0 keeps the runtime default.
  int jobs = 0;
};

/// Throws InputError for an unscannable statement or kappa < 2.
void validate(const ScanConfig& cfg);

struct ScanError {
  StatementId statement{};
  Instance instance;
  std::string kind;  // "input", "scope", "invariant"
  std::string message;
};

struct ScanResult {
  std::vector<CongruenceReport> reports;  // sorted by instance
  std::vector<ScanError> errors;
  std::size_t skipped = 0;                // hypothesis not met (PreconditionError)
};

ScanResult scan_serial(const ScanConfig& cfg);
ScanResult scan(const ScanConfig& cfg);

/// Runs one statement on one instance, dispatching on the statement id.
/// Missing instance fields raise InputError.
CongruenceReport run_check(StatementId id, const Instance& inst);

}  // namespace supercong
