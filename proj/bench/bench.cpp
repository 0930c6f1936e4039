// Serial reference vs OpenMP kernel timings. Each pair is checked for equal
// results before its timings are reported.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "supercong/bernoulli.hpp"
#include "supercong/congruence_suite.hpp"
#include "supercong/padic_lfun.hpp"
#include "supercong/quadratic_field.hpp"

using namespace supercong;

namespace {

double median_seconds(int reps, const std::function<void()>& fn) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void row(const std::string& name, double serial, double parallel, bool same) {
  std::cout << fmt::format("{:<34} {:>10.4f} {:>10.4f} {:>8.2f}x  {}\n", name, serial, parallel, serial / parallel,
                           same ? "equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernels"};
  int reps = 5;
  int threads = 0;
  app.add_option("--reps", reps, "Repetitions per measurement (median reported)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  std::cout << fmt::format("threads: {}  reps: {}\n", omp_get_max_threads(), reps);
  std::cout << fmt::format("{:<34} {:>10} {:>10} {:>9}\n", "kernel", "serial s", "openmp s", "speedup");
  bool ok = true;

  {
    const auto chi = QuadChar::from_discriminant(-199999);
    std::vector<BigInt> a, b;
    const double s = median_seconds(reps, [&] { a = character_power_sums(chi, 40, Parallelism::serial); });
    const double p = median_seconds(reps, [&] { b = character_power_sums(chi, 40, Parallelism::openmp); });
    row("power sums f=199999, k<=40", s, p, a == b);
    ok &= a == b;
  }
  {
    const auto split = split_character(1990, 199);
    CoefficientBundle a, b;
    const double s = median_seconds(reps, [&] { a = a_coefficients_direct(split.chi_D, 199, Parallelism::serial); });
    const double p = median_seconds(reps, [&] { b = a_coefficients_direct(split.chi_D, 199, Parallelism::openmp); });
    const bool same = a.a0 == b.a0 && a.a1 == b.a1;
    row("direct a-coefficients D=7960", s, p, same);
    ok &= same;
  }
  {
    const std::int64_t D = 49190581;  // 11 * 43 * 103997
    std::vector<QuadraticForm> a, b;
    const double s = median_seconds(reps, [&] { a = reduced_forms(D, Parallelism::serial); });
    const double p = median_seconds(reps, [&] { b = reduced_forms(D, Parallelism::openmp); });
    row("reduced forms D=49190581 (*)", s, p, a == b);
    ok &= a == b;
  }
  {
    ScanConfig cfg;
    cfg.statement = StatementId::THM1;
    cfg.d_max = 2000;
    cfg.p_max = 200;
    cfg.jobs = threads;
    ScanResult a, b;
    const double s = median_seconds(reps, [&] { a = scan_serial(cfg); });
    const double p = median_seconds(reps, [&] { b = scan(cfg); });
    bool same = a.reports.size() == b.reports.size();
    for (std::size_t i = 0; same && i < a.reports.size(); ++i)
      same = a.reports[i].instance == b.reports[i].instance && a.reports[i].lhs == b.reports[i].lhs;
    row("scan thm1 d<=2000, 7<=p<=200", s, p, same);
    ok &= same;
  }
  std::cout << "(*) the serial reference factors by trial division, the OpenMP kernel sieves per block\n";
  return ok ? 0 : 1;
}
