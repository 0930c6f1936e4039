#include "supercong/cli.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "supercong/bernoulli.hpp"
#include "supercong/cache_io.hpp"
#include "supercong/congruence_suite.hpp"
#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"
#include "supercong/padic_lfun.hpp"
#include "supercong/serialize.hpp"

namespace supercong {

namespace {

const std::set<std::string> kBooleanKeys = {"long-running", "include-p5", "timings"};

struct Common {
  std::string format = "json";
  std::string cache_dir;
  std::string manifest;
  bool timings = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--cache-dir", c.cache_dir, "Directory holding bernoulli-cache-v1.json");
  sub->add_option("--manifest", c.manifest, "Write the run manifest here instead of stderr");
  sub->add_flag("--timings", c.timings, "Include per-report elapsed time");
}

class CacheSession {
 public:
  CacheSession(const std::string& dir, std::ostream& err) : dir_(dir) {
    if (dir_.empty()) return;
    prepare_cache_dir(dir_);
    const auto st = load_cache(dir_, BernoulliCache::shared());
    for (const auto& w : st.warnings) err << "warning: " << w << '\n';
  }
  void store() const {
    if (!dir_.empty()) store_cache(dir_, BernoulliCache::shared());
  }

 private:
  std::filesystem::path dir_;
};

void emit_manifest(const Common& c, RunManifest m, double seconds, std::ostream& err) {
  m.tool_version = kToolVersion;
  m.wall_seconds = seconds;
  m.config["format"] = c.format;
  if (!c.cache_dir.empty()) m.config["cache-dir"] = c.cache_dir;
  if (c.manifest.empty()) {
    err << "manifest: " << m.to_json() << '\n';
    return;
  }
  std::ofstream f(c.manifest);
  if (!f) throw InputError(fmt::format("cannot write manifest {}", c.manifest));
  f << m.to_json() << '\n';
}

void write_reports(std::ostream& out, const Common& c, const std::vector<CongruenceReport>& reports,
                   const std::vector<ScanError>& errors, std::ostream& err) {
  const bool csv = c.format == "csv";
  if (csv) out << report_csv_header(c.timings) << '\n';
  for (const auto& r : reports) out << (csv ? report_csv(r, c.timings) : report_json(r, c.timings)) << '\n';
  for (const auto& e : errors) {
    if (csv)
      err << "error: " << error_json(e) << '\n';
    else
      out << error_json(e) << '\n';
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StatementId statement_or_throw(const std::string& name) {
  const auto id = parse_statement(name);
  if (!id) throw InputError(fmt::format("unknown statement '{}'", name));
  return *id;
}

std::string instance_config(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "-"; }

std::string factorization_str(std::int64_t n) {
  std::string s;
  for (auto [q, e] : factorize(n)) {
    if (!s.empty()) s += "*";
    s += std::to_string(q);
    if (e > 1) s += fmt::format("^{}", e);
  }
  return s;
}

}  // namespace

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {4099215, "3*5*273281", 4, 3, 3, false},
      {125854178626, "2*11*17*336508499", 8, 11, 2, true},
      {20256129307923, "3*569*2659*4462771", 16, 3, 2, true},
  };
  return rows;
}

Table1Result compute_table1_row(const Table1Row& row) {
  const auto t0 = std::chrono::steady_clock::now();
  Table1Result res;
  res.expected = row;
  res.computed = true;
  res.factorization = factorization_str(row.d);
  const FieldInvariants inv = field_invariants(row.d, Parallelism::openmp);
  res.h = inv.h;
  res.vp_u = vp(inv.u, row.p).clamped();
  res.match = res.factorization == row.factorization && res.h == row.h && res.vp_u == row.vp_u;
  res.seconds = seconds_since(t0);
  return res;
}

std::vector<std::string> config_file_args(const std::string& path, const std::vector<std::string>& args) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read config file {}", path));
  auto present = [&](const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("{}:{}: expected key=value", path, lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") throw InputError(fmt::format("{}:{}: nested config files are not supported", path, lineno));
    if (present(key)) continue;
    if (kBooleanKeys.count(key)) {
      if (value == "true" || value == "1") extra.push_back("--" + key);
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  return extra;
}

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = args_in;
  CLI::App app{"Exact verification of Ankeny-Artin-Chowla type congruences", "supercong"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file mirroring the command-line flags");

  // verify
  Common vc;
  std::string v_statement;
  Instance vi;
  std::int64_t vd = 0, vp_ = 0, vk = 0, vdisc = 0, vb = 0;
  auto* verify = app.add_subcommand("verify", "Check one statement on one instance");
  verify->add_option("statement", v_statement, "Statement id")->required();
  auto* o_d = verify->add_option("--d", vd, "Squarefree d");
  auto* o_p = verify->add_option("--p", vp_, "Prime p");
  auto* o_k = verify->add_option("--k", vk, "Index k");
  auto* o_disc = verify->add_option("--disc", vdisc, "Character discriminant");
  auto* o_b = verify->add_option("--b", vb, "Offset b (Sun's congruence)");
  add_common(verify, vc);

  // scan
  Common sc;
  std::string s_statement;
  ScanConfig cfg;
  std::string s_output;
  auto* scan_cmd = app.add_subcommand("scan", "Check one statement over a grid of instances");
  scan_cmd->add_option("statement", s_statement, "Statement id")->required();
  scan_cmd->add_option("--d-min", cfg.d_min, "Smallest d");
  scan_cmd->add_option("--d-max", cfg.d_max, "Largest d");
  scan_cmd->add_option("--p-min", cfg.p_min, "Smallest prime");
  scan_cmd->add_option("--p-max", cfg.p_max, "Largest prime (0: no bound on d-grids)");
  scan_cmd->add_option("--k-min", cfg.k_min, "Smallest k");
  scan_cmd->add_option("--k-max", cfg.k_max, "Largest k");
  scan_cmd->add_option("--jobs", cfg.jobs, "Worker threads (0: runtime default)");
  scan_cmd->add_option("--kappa", cfg.kappa, "Alert when v_p(u) >= kappa");
  scan_cmd->add_flag("--include-p5", cfg.include_p5, "Also report p = 5 (advisory)");
  scan_cmd->add_flag("--long-running", cfg.long_running, "Allow Bernoulli indices above 5000");
  scan_cmd->add_option("--output", s_output, "Report file (default stdout)");
  add_common(scan_cmd, sc);

  // table1
  Common tc;
  bool t_long = false;
  int t_jobs = 0;
  auto* table1 = app.add_subcommand("table1", "Recompute the table of fields with p^2 | u");
  table1->add_flag("--long-running", t_long, "Include the two large rows");
  table1->add_option("--jobs", t_jobs, "Worker threads (0: runtime default)");
  add_common(table1, tc);

  // bernoulli
  Common bc;
  int b_n = 0;
  int b_n_min = -1;
  std::int64_t b_disc = 1;
  auto* bern = app.add_subcommand("bernoulli", "Print B_n or B_{n,chi}");
  bern->add_option("--n", b_n, "Index (or last index with --n-min)")->required();
  bern->add_option("--n-min", b_n_min, "First index of a range");
  bern->add_option("--disc", b_disc, "Character discriminant (1: plain B_n)");
  add_common(bern, bc);

  // lfun
  Common lc;
  std::int64_t l_p = 0, l_d = 0, l_disc = 0;
  auto* lfun = app.add_subcommand("lfun", "Print the coefficients a_-1, a_0, a_1 of L_p(1 - s, chi)");
  lfun->add_option("--p", l_p, "Prime p > 3")->required();
  auto* o_ld = lfun->add_option("--d", l_d, "Squarefree d divisible by p (character chi_D)");
  lfun->add_option("--disc", l_disc, "Character discriminant divisible by p")->excludes(o_ld);
  add_common(lfun, lc);

  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!args.empty() && args.back().rfind("--config=", 0) == 0) config_path = args.back().substr(9);
    if (!config_path.empty()) {
      auto extra = config_file_args(config_path, args);
      args.insert(args.end(), extra.begin(), extra.end());
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (verify->parsed()) {
      const StatementId id = statement_or_throw(v_statement);
      if (o_d->count()) vi.d = vd;
      if (o_p->count()) vi.p = vp_;
      if (o_k->count()) vi.k = vk;
      if (o_disc->count()) vi.disc = vdisc;
      if (o_b->count()) vi.b = vb;
      CacheSession cache(vc.cache_dir, err);
      std::vector<CongruenceReport> reports;
      std::vector<ScanError> errors;
      std::size_t skipped = 0;
      try {
        reports.push_back(run_check(id, vi));
      } catch (const PreconditionError& e) {
        ++skipped;
        err << "skipped: " << e.what() << '\n';
      } catch (const InvariantViolation& e) {
        errors.push_back({id, vi, "invariant", e.what()});
      } catch (const ScopeError& e) {
        errors.push_back({id, vi, "scope", e.what()});
      } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
      }
      write_reports(out, vc, reports, errors, err);
      cache.store();
      RunManifest m;
      m.command = "verify";
      m.config = {{"statement", v_statement}, {"d", instance_config(vi.d)}, {"p", instance_config(vi.p)},
                  {"k", instance_config(vi.k)}, {"disc", instance_config(vi.disc)}, {"b", instance_config(vi.b)}};
      m.counts = tally(reports, errors.size(), skipped);
      emit_manifest(vc, m, seconds_since(t0), err);
      return exit_code_for(reports, errors);
    }

    if (scan_cmd->parsed()) {
      cfg.statement = statement_or_throw(s_statement);
      validate(cfg);
      CacheSession cache(sc.cache_dir, err);
      const ScanResult res = scan(cfg);
      std::ofstream file;
      if (!s_output.empty()) {
        file.open(s_output, std::ios::trunc);
        if (!file) throw InputError(fmt::format("cannot write {}", s_output));
      }
      std::ostream& dest = s_output.empty() ? out : file;
      write_reports(dest, sc, res.reports, res.errors, err);
      std::size_t attention = 0;
      for (const auto& r : res.reports)
        if (is_detector(r.statement) && r.holds) ++attention;
      if (attention) err << fmt::format("note: {} detector row(s) where the criterion holds\n", attention);
      cache.store();
      RunManifest m;
      m.command = "scan";
      m.config = {{"statement", s_statement},
                  {"d-min", std::to_string(cfg.d_min)},
                  {"d-max", std::to_string(cfg.d_max)},
                  {"p-min", std::to_string(cfg.p_min)},
                  {"p-max", std::to_string(cfg.p_max)},
                  {"k-min", std::to_string(cfg.k_min)},
                  {"k-max", std::to_string(cfg.k_max)},
                  {"kappa", std::to_string(cfg.kappa)},
                  {"include-p5", cfg.include_p5 ? "true" : "false"},
                  {"long-running", cfg.long_running ? "true" : "false"}};
      m.counts = tally(res.reports, res.errors.size(), res.skipped);
      emit_manifest(sc, m, seconds_since(t0), err);
      return exit_code_for(res.reports, res.errors);
    }

    if (table1->parsed()) {
      if (t_jobs > 0) omp_set_num_threads(t_jobs);
      bool all_match = true;
      std::size_t computed = 0, skipped = 0;
      if (tc.format == "csv") out << "d,factorization,h,expected_h,p,vp_u,expected_vp_u,match,status\n";
      for (const auto& row : table1_rows()) {
        if (row.long_running && !t_long) {
          ++skipped;
          if (tc.format == "csv") {
            out << fmt::format("{},,,{},{},,{},,skipped: needs --long-running\n", row.d, row.h, row.p, row.vp_u);
          } else {
            nlohmann::ordered_json j;
            j["d"] = row.d;
            j["expected_h"] = row.h;
            j["p"] = row.p;
            j["expected_vp_u"] = row.vp_u;
            j["status"] = "skipped: needs --long-running";
            out << j.dump() << '\n';
          }
          continue;
        }
        const Table1Result r = compute_table1_row(row);
        ++computed;
        all_match = all_match && r.match;
        if (tc.format == "csv") {
          out << fmt::format("{},{},{},{},{},{},{},{},{}\n", row.d, r.factorization, r.h, row.h, row.p, r.vp_u,
                             row.vp_u, r.match ? "true" : "false", r.match ? "match" : "MISMATCH");
        } else {
          nlohmann::ordered_json j;
          j["d"] = row.d;
          j["factorization"] = r.factorization;
          j["h"] = r.h;
          j["expected_h"] = row.h;
          j["p"] = row.p;
          j["vp_u"] = r.vp_u;
          j["expected_vp_u"] = row.vp_u;
          j["match"] = r.match;
          if (tc.timings) j["seconds"] = r.seconds;
          out << j.dump() << '\n';
        }
      }
      RunManifest m;
      m.command = "table1";
      m.config = {{"long-running", t_long ? "true" : "false"}};
      m.counts.instances = computed + skipped;
      m.counts.pass = all_match ? computed : 0;
      m.counts.fail = all_match ? 0 : computed;
      m.counts.skipped = skipped;
      if (!all_match) {
        m.counts.pass = 0;
        m.counts.fail = computed;
      }
      emit_manifest(tc, m, seconds_since(t0), err);
      return all_match ? 0 : 1;
    }

    if (bern->parsed()) {
      const QuadChar chi = b_disc == 1 ? QuadChar::principal() : QuadChar::from_discriminant(b_disc);
      const int lo = b_n_min >= 0 ? b_n_min : b_n;
      if (lo > b_n || lo < 0) throw InputError("need 0 <= --n-min <= --n");
      CacheSession cache(bc.cache_dir, err);
      if (bc.format == "csv") out << "n,disc,value\n";
      for (int n = lo; n <= b_n; ++n) {
        const Rational v = b_disc == 1 ? bernoulli(n) : gen_bernoulli(n, chi);
        if (bc.format == "csv") {
          out << fmt::format("{},{},{}\n", n, b_disc, v.fraction_str());
        } else {
          nlohmann::ordered_json j;
          j["n"] = n;
          j["disc"] = b_disc == 1 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(b_disc);
          j["value"] = v.fraction_str();
          out << j.dump() << '\n';
        }
      }
      cache.store();
      RunManifest m;
      m.command = "bernoulli";
      m.config = {{"n-min", std::to_string(lo)}, {"n", std::to_string(b_n)}, {"disc", std::to_string(b_disc)}};
      m.counts.instances = m.counts.pass = static_cast<std::size_t>(b_n - lo + 1);
      emit_manifest(bc, m, seconds_since(t0), err);
      return 0;
    }

    if (lfun->parsed()) {
      CacheSession cache(lc.cache_dir, err);
      std::optional<CharacterSplit> split;
      QuadChar chi = QuadChar::principal();
      if (l_d) {
        split = split_character(l_d, l_p);
        chi = split->chi_D;
      } else if (l_disc) {
        chi = QuadChar::from_discriminant(l_disc);
      }
      const CoefficientBundle bundle = a_coefficients_direct(chi, l_p);
      check_bundle_invariants(bundle);
      nlohmann::ordered_json j;
      j["p"] = l_p;
      j["disc"] = chi.is_principal() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(chi.discriminant());
      j["F"] = bundle.F;
      j["a_minus1"] = bundle.a_minus1.fraction_str();
      j["a0"] = bundle.a0.fraction_str();
      j["a1"] = bundle.a1.fraction_str();
      const PadicContext ctx(l_p, 2);
      if (chi.is_principal()) {
        const Rational a0c = a0_closed_principal(l_p);
        const Rational a1c = a1_closed_principal(l_p);
        j["a0_closed"] = a0c.fraction_str();
        j["a1_closed"] = a1c.fraction_str();
        j["a0_agrees_mod_p2"] = congruent(a0c, bundle.a0, ctx);
        j["a1_agrees_mod_p2"] = congruent(a1c, bundle.a1, ctx);
      } else if (split && split->d != 5) {
        const Rational a1c = a1_closed_quadratic(*split);
        j["a1_closed"] = a1c.fraction_str();
        j["a1_agrees_mod_p2"] = congruent(a1c, bundle.a1, ctx);
      }
      out << j.dump() << '\n';
      cache.store();
      RunManifest m;
      m.command = "lfun";
      m.config = {{"p", std::to_string(l_p)}, {"d", std::to_string(l_d)}, {"disc", std::to_string(l_disc)}};
      m.counts.instances = m.counts.pass = 1;
      emit_manifest(lc, m, seconds_since(t0), err);
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ScopeError& e) {
    err << "error: out of scope: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    err << "INVARIANT VIOLATION: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace supercong
