#pragma once

// Machine-readable report output: JSON lines and CSV, with rationals as
// exact "num/den" strings.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "supercong/congruence_suite.hpp"
#include "supercong/report.hpp"

namespace supercong {

enum class OutputFormat { json, csv };

/// One JSON object, no trailing newline. Elapsed time only when timings is set,
/// so that repeated runs produce identical bytes.
std::string report_json(const CongruenceReport& r, bool timings = false);
std::string report_csv_header(bool timings = false);
std::string report_csv(const CongruenceReport& r, bool timings = false);
std::string error_json(const ScanError& e);

/// Re-derives holds from the serialized lhs, rhs, depth and p.
bool validate_report_json(const std::string& line);

struct Tally {
  std::size_t instances = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t error = 0;
  std::size_t skipped = 0;
  std::size_t advisory = 0;
};

Tally tally(const std::vector<CongruenceReport>& reports, std::size_t errors, std::size_t skipped);

/// 0 when every gated report holds (detectors never fail the run), 1 on a
/// violation or an invariant error, 2 when only input errors occurred.
int exit_code_for(const std::vector<CongruenceReport>& reports, const std::vector<ScanError>& errors);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::string tool_version;
  double wall_seconds = 0;
  Tally counts;
  /// Keys in a fixed order.
  [[nodiscard]] std::string to_json() const;
};

}  // namespace supercong
