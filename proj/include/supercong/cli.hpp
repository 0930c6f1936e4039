#pragma once

// Command-line front end. run_cli is the whole program minus main(), so tests
// can drive it with captured streams.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace supercong {

inline constexpr const char* kToolVersion = "0.1.0";

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Reads key=value lines ('#' comments, blank lines ignored) and returns the
/// equivalent "--key value" arguments for every key not already present in
/// args, so explicit flags win.
std::vector<std::string> config_file_args(const std::string& path, const std::vector<std::string>& args);

struct Table1Row {
  std::int64_t d = 0;
  std::string factorization;
  std::int64_t h = 0;
  std::int64_t p = 0;
  long vp_u = 0;
  bool long_running = false;
};

struct Table1Result {
  Table1Row expected;
  bool computed = false;
  std::string factorization;
  std::int64_t h = 0;
  long vp_u = 0;
  bool match = false;
  double seconds = 0;
};

const std::vector<Table1Row>& table1_rows();
Table1Result compute_table1_row(const Table1Row& row);

}  // namespace supercong
