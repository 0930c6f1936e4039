#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "supercong/bernoulli.hpp"
#include "supercong/cache_io.hpp"
#include "supercong/cli.hpp"
#include "supercong/serialize.hpp"

using namespace supercong;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "supercong");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("supercong-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  std::ofstream out(p);
  out << j.dump();
}

}  // namespace

TEST(Cli, VerifyExitCodes) {
  auto r = run({"verify", "thm1", "--d", "14", "--p", "7", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_TRUE(validate_report_json(ls[0]));
  EXPECT_NE(r.err.find("manifest: "), std::string::npos);

  EXPECT_EQ(run({"verify", "lehmer2", "--p", "7", "--k", "1"}).code, 0);
  EXPECT_EQ(run({"verify", "thm1", "--d", "12", "--p", "3"}).code, 2);
  EXPECT_EQ(run({"verify", "no-such-statement", "--p", "7"}).code, 2);
  EXPECT_EQ(run({"verify", "thm1", "--p", "7"}).code, 2);
  EXPECT_EQ(run({"verify", "lehmer2", "--p", "3", "--k", "4"}).code, 1);
  EXPECT_EQ(run({"verify", "thm3", "--p", "7", "--k", "2"}).code, 1);
  // Detectors exit 0 whether or not the criterion holds.
  EXPECT_EQ(run({"verify", "super-wilson", "--p", "13"}).code, 0);
  EXPECT_EQ(run({"verify", "super-aacm", "--d", "14", "--p", "7"}).code, 0);
  // v_7(u) = 0: hypothesis not met, reported as skipped.
  EXPECT_EQ(run({"verify", "cor-exact-div", "--d", "14", "--p", "7"}).code, 0);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "thm1", "--d", "14", "--p", "7", "--format", "xml"}).code, 2);
}

TEST(Cli, ScanExamples) {
  auto empty = run({"scan", "thm1", "--d-max", "5"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_TRUE(lines(empty.out).empty());

  auto sw = run({"scan", "super-wilson", "--p-max", "300"});
  EXPECT_EQ(sw.code, 0);
  const auto ls = lines(sw.out);
  EXPECT_EQ(ls.size(), 59u);  // primes 7..293 under the default --p-min 7
  for (const auto& l : ls) {
    EXPECT_FALSE(nlohmann::json::parse(l)["holds"].get<bool>()) << l;
    EXPECT_TRUE(validate_report_json(l));
  }

  auto csv = run({"scan", "thm1", "--d-max", "300", "--p-max", "50", "--format", "csv"});
  EXPECT_EQ(csv.code, 0);
  const auto cl = lines(csv.out);
  ASSERT_GT(cl.size(), 1u);
  EXPECT_EQ(cl[0], report_csv_header());

  auto lehmer = run({"scan", "lehmer2", "--p-min", "3", "--p-max", "20", "--k-max", "5"});
  EXPECT_EQ(lehmer.code, 1);
}

TEST(Cli, ScanWritesOutputFileAndManifest) {
  TempDir dir;
  const auto report = dir.path() / "out.jsonl";
  const auto manifest = dir.path() / "manifest.json";
  auto r = run({"scan", "thm1", "--d-max", "200", "--p-max", "50", "--output", report.string(), "--manifest",
                manifest.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  const auto m = read_json(manifest);
  EXPECT_EQ(m["command"], "scan");
  EXPECT_EQ(m["instances"].get<int>(), m["pass"].get<int>() + m["fail"].get<int>() + m["error"].get<int>() +
                                            m["skipped"].get<int>());
  std::ifstream in(report);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(lines(ss.str()).size(), m["pass"].get<std::size_t>());
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args = {"scan", "super-aacm", "--d-max", "700", "--p-max", "100", "--jobs", "3"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out.find("elapsed"), std::string::npos);
  const auto t = run({"verify", "thm1", "--d", "14", "--p", "7", "--timings"});
  EXPECT_NE(t.out.find("elapsed_ms"), std::string::npos);
}

TEST(Cli, ValidatorRejectsEditedReports) {
  auto r = run({"verify", "thm1", "--d", "14", "--p", "7"});
  auto j = nlohmann::json::parse(lines(r.out).at(0));
  EXPECT_TRUE(validate_report_json(j.dump()));
  j["holds"] = false;
  EXPECT_FALSE(validate_report_json(j.dump()));
  j["holds"] = true;
  j["lhs"] = "1/3";
  EXPECT_FALSE(validate_report_json(j.dump()));
  EXPECT_FALSE(validate_report_json("not json"));
}

TEST(Cli, ExitCodeContract) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<CongruenceReport> reports;
    std::vector<ScanError> errors;
    bool gated_fail = false, invariant = false;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      CongruenceReport r;
      r.statement = (rng() % 3 == 0) ? StatementId::SUPER_WILSON_CRIT : StatementId::THM1;
      r.holds = rng() % 2;
      r.advisory = rng() % 4 == 0;
      if (!r.holds && !r.advisory && !is_detector(r.statement)) gated_fail = true;
      reports.push_back(r);
    }
    const int e = static_cast<int>(rng() % 3);
    for (int i = 0; i < e; ++i) {
      ScanError err;
      err.kind = rng() % 4 == 0 ? "invariant" : "input";
      if (err.kind == "invariant") invariant = true;
      errors.push_back(err);
    }
    const int expected = (gated_fail || invariant) ? 1 : (errors.empty() ? 0 : 2);
    EXPECT_EQ(exit_code_for(reports, errors), expected);
  }
}

TEST(Cli, ManifestTalliesSum) {
  auto r = run({"scan", "cor-exact-div", "--d-max", "800", "--p-max", "100"});
  EXPECT_EQ(r.code, 0);
  const auto pos = r.err.find("manifest: ");
  ASSERT_NE(pos, std::string::npos);
  const auto m = nlohmann::json::parse(r.err.substr(pos + 10, r.err.find('\n', pos) - pos - 10));
  EXPECT_GT(m["skipped"].get<int>(), 0);
  EXPECT_EQ(m["instances"].get<int>(), m["pass"].get<int>() + m["fail"].get<int>() + m["error"].get<int>() +
                                            m["skipped"].get<int>());
}

TEST(Cache, RoundTrip) {
  TempDir dir;
  BernoulliCache a;
  a.bernoulli(40);
  a.generalized(12, QuadChar::from_discriminant(-8));
  a.generalized(9, QuadChar::from_discriminant(13));
  store_cache(dir.path(), a);
  ASSERT_TRUE(fs::exists(dir.path() / kCacheFileName));
  BernoulliCache b;
  const auto st = load_cache(dir.path(), b);
  EXPECT_TRUE(st.file_found);
  EXPECT_EQ(st.rejected, 0u);
  EXPECT_EQ(st.loaded, a.size());
  const auto sa = a.snapshot(), sb = b.snapshot();
  ASSERT_EQ(sa.size(), sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    EXPECT_EQ(sa[i].n, sb[i].n);
    EXPECT_EQ(sa[i].disc, sb[i].disc);
    EXPECT_EQ(sa[i].value, sb[i].value);
  }
  // Hit without recomputation.
  EXPECT_EQ(b.bernoulli(12), Rational(-691, 2730));
  EXPECT_EQ(b.computed_count(), 0u);
}

TEST(Cache, TamperedEntryIsRejected) {
  TempDir dir;
  BernoulliCache a;
  a.bernoulli(12);
  a.generalized(4, QuadChar::from_discriminant(5));
  store_cache(dir.path(), a);
  auto j = read_json(dir.path() / kCacheFileName);
  bool edited = false;
  for (auto& e : j["entries"])
    if (e["n"] == 12 && e["disc"].is_null()) {
      e["num"] = "-692";
      edited = true;
    }
  ASSERT_TRUE(edited);
  j["entries"].push_back({{"n", 4}, {"disc", 5}, {"num", "-8"}, {"den", "2"}});
  j["entries"].push_back({{"n", "x"}, {"disc", nullptr}, {"num", "1"}, {"den", "1"}});
  write_json(dir.path() / kCacheFileName, j);
  BernoulliCache b;
  const auto st = load_cache(dir.path(), b);
  EXPECT_GE(st.rejected, 3u);
  EXPECT_FALSE(st.warnings.empty());
  EXPECT_EQ(b.bernoulli(12), Rational(-691, 2730));
  EXPECT_EQ(b.generalized(4, QuadChar::from_discriminant(5)), Rational(-8));
}

TEST(Cache, NonCanonicalFractionIsRejected) {
  TempDir dir;
  nlohmann::json j = {{"version", kCacheVersion},
                      {"entries", {{{"n", 2}, {"disc", nullptr}, {"num", "2"}, {"den", "12"}}}}};
  write_json(dir.path() / kCacheFileName, j);
  BernoulliCache b;
  const auto st = load_cache(dir.path(), b);
  EXPECT_EQ(st.loaded, 0u);
  EXPECT_EQ(st.rejected, 1u);
}

TEST(Cache, VersionMismatchIsIgnored) {
  TempDir dir;
  nlohmann::json j = {{"version", 2}, {"entries", {{{"n", 2}, {"disc", nullptr}, {"num", "1"}, {"den", "6"}}}}};
  write_json(dir.path() / kCacheFileName, j);
  BernoulliCache b;
  const auto st = load_cache(dir.path(), b);
  EXPECT_TRUE(st.file_found);
  EXPECT_TRUE(st.version_mismatch);
  EXPECT_EQ(st.loaded, 0u);
  EXPECT_EQ(b.size(), 0u);
}

TEST(Cache, CorruptFileIsIgnored) {
  TempDir dir;
  std::ofstream(dir.path() / kCacheFileName) << "{ not json";
  BernoulliCache b;
  const auto st = load_cache(dir.path(), b);
  EXPECT_EQ(st.loaded, 0u);
  EXPECT_FALSE(st.warnings.empty());
}

TEST(Cache, ModQRecomputationMatchesExact) {
  const auto table = bernoulli_mod_q(80);
  for (int n = 0; n <= 80; ++n) EXPECT_EQ(table[static_cast<std::size_t>(n)], *rational_mod_q(bernoulli(n))) << n;
  for (std::int64_t D : {-3, -4, 5, -8, 12, -84, 105})
    for (int n = 0; n <= 20; ++n) {
      const auto chi = QuadChar::from_discriminant(D);
      EXPECT_EQ(gen_bernoulli_mod_q(n, chi, table), *rational_mod_q(gen_bernoulli(n, chi))) << D << " " << n;
    }
  EXPECT_EQ(gen_bernoulli_mod_q(1, QuadChar::principal(), table), *rational_mod_q(Rational(1, 2)));
}

TEST(Cli, CacheDirThroughCli) {
  TempDir dir;
  auto r1 = run({"bernoulli", "--n", "30", "--n-min", "0", "--cache-dir", dir.path().string()});
  EXPECT_EQ(r1.code, 0);
  EXPECT_TRUE(fs::exists(dir.path() / kCacheFileName));
  auto r2 = run({"bernoulli", "--n", "30", "--n-min", "0", "--cache-dir", dir.path().string()});
  EXPECT_EQ(r2.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(r2.err.find("warning"), std::string::npos) << r2.err;
  EXPECT_EQ(lines(r1.out).size(), 31u);
}

TEST(Cli, UnwritableCacheDirExitsTwo) {
  TempDir dir;
  const auto file = dir.path() / "plain-file";
  std::ofstream(file) << "x";
  auto r = run({"verify", "thm1", "--d", "14", "--p", "7", "--cache-dir", (file / "sub").string()});
  EXPECT_EQ(r.code, 2);
  auto s = run({"scan", "thm1", "--d-max", "100", "--cache-dir", (file / "sub").string()});
  EXPECT_EQ(s.code, 2);
}

TEST(Cli, ConfigFileFlagsWin) {
  TempDir dir;
  const auto cfg = dir.path() / "run.conf";
  std::ofstream(cfg) << "# thm1 instance\nd = 14\np=5\n\nformat=csv\ntimings=false\n";
  auto r = run({"--config", cfg.string(), "verify", "thm1", "--p", "7"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], report_csv_header());
  EXPECT_EQ(ls[1].rfind("thm1,14,7,", 0), 0u) << ls[1];

  std::ofstream(dir.path() / "bad.conf") << "d 14\n";
  EXPECT_EQ(run({"--config", (dir.path() / "bad.conf").string(), "verify", "thm1"}).code, 2);
  EXPECT_EQ(run({"--config", (dir.path() / "missing.conf").string(), "verify", "thm1"}).code, 2);
}

TEST(Cli, BernoulliAndLfunDumps) {
  auto b = run({"bernoulli", "--n", "12"});
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("-691/2730"), std::string::npos);
  auto g = run({"bernoulli", "--n", "2", "--disc", "5"});
  EXPECT_NE(g.out.find("4/5"), std::string::npos);
  EXPECT_EQ(run({"bernoulli", "--n", "2", "--disc", "6"}).code, 2);
  auto l = run({"lfun", "--p", "7", "--d", "14"});
  EXPECT_EQ(l.code, 0) << l.err;
  EXPECT_EQ(run({"lfun", "--p", "7", "--d", "15"}).code, 2);
  EXPECT_EQ(run({"lfun", "--p", "7"}).code, 0);
}

TEST(Cli, Table1FirstRow) {
  auto r = run({"table1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("4099215"), std::string::npos);
  const auto& rows = table1_rows();
  ASSERT_EQ(rows.size(), 3u);
  const auto res = compute_table1_row(rows[0]);
  EXPECT_TRUE(res.match);
  EXPECT_EQ(res.h, 4);
  EXPECT_EQ(res.vp_u, 3);
}
