#include "supercong/serialize.hpp"

#include <fmt/format.h>

#include "json.hpp"
#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"

namespace supercong {

namespace {

using ordered_json = nlohmann::ordered_json;

void put_instance(ordered_json& j, const Instance& i) {
  if (i.d) j["d"] = *i.d;
  if (i.p) j["p"] = *i.p;
  if (i.k) j["k"] = *i.k;
  if (i.disc) j["disc"] = *i.disc;
  if (i.b) j["b"] = *i.b;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_str(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::string report_json(const CongruenceReport& r, bool timings) {
  ordered_json j;
  j["statement"] = std::string(statement_name(r.statement));
  put_instance(j, r.instance);
  j["lhs"] = r.lhs.fraction_str();
  j["rhs"] = r.rhs.fraction_str();
  j["depth"] = r.depth;
  if (r.difference_valuation.is_infinite())
    j["difference_valuation"] = nullptr;
  else
    j["difference_valuation"] = r.difference_valuation.value();
  j["holds"] = r.holds;
  j["advisory"] = r.advisory;
  if (!r.note.empty()) j["note"] = r.note;
  if (timings) j["elapsed_ms"] = static_cast<double>(r.elapsed.count()) / 1e6;
  return j.dump();
}

std::string report_csv_header(bool timings) {
  std::string h = "statement,d,p,k,disc,b,depth,difference_valuation,holds,advisory,lhs,rhs,note";
  if (timings) h += ",elapsed_ms";
  return h;
}

std::string report_csv(const CongruenceReport& r, bool timings) {
  const auto& i = r.instance;
  std::string line = fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", statement_name(r.statement), opt_str(i.d),
                                 opt_str(i.p), opt_str(i.k), opt_str(i.disc), opt_str(i.b), r.depth,
                                 r.difference_valuation.str(), r.holds ? "true" : "false",
                                 r.advisory ? "true" : "false", r.lhs.fraction_str(), r.rhs.fraction_str(),
                                 csv_field(r.note));
  if (timings) line += fmt::format(",{:.3f}", static_cast<double>(r.elapsed.count()) / 1e6);
  return line;
}

std::string error_json(const ScanError& e) {
  ordered_json j;
  j["statement"] = std::string(statement_name(e.statement));
  put_instance(j, e.instance);
  j["error"] = e.kind;
  j["message"] = e.message;
  return j.dump();
}

bool validate_report_json(const std::string& line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  try {
    const Rational lhs = Rational::parse(j.at("lhs").get<std::string>());
    const Rational rhs = Rational::parse(j.at("rhs").get<std::string>());
    const auto p = j.at("p").get<std::int64_t>();
    const Valuation v = vp(lhs - rhs, p);
    const auto& dv = j.at("difference_valuation");
    if (dv.is_null() != v.is_infinite()) return false;
    if (!dv.is_null() && dv.get<long>() != v.value()) return false;
    return v.at_least(j.at("depth").get<int>()) == j.at("holds").get<bool>();
  } catch (const nlohmann::json::exception&) {
    return false;
  } catch (const InputError&) {
    return false;
  }
}

Tally tally(const std::vector<CongruenceReport>& reports, std::size_t errors, std::size_t skipped) {
  Tally t;
  t.instances = reports.size() + errors + skipped;
  t.error = errors;
  t.skipped = skipped;
  for (const auto& r : reports) {
    if (r.holds)
      ++t.pass;
    else
      ++t.fail;
    if (r.advisory) ++t.advisory;
  }
  return t;
}

int exit_code_for(const std::vector<CongruenceReport>& reports, const std::vector<ScanError>& errors) {
  bool violation = false;
  for (const auto& r : reports)
    if (!r.holds && !r.advisory && !is_detector(r.statement)) violation = true;
  bool invariant = false;
  for (const auto& e : errors)
    if (e.kind == "invariant") invariant = true;
  if (violation || invariant) return 1;
  if (!errors.empty()) return 2;
  return 0;
}

std::string RunManifest::to_json() const {
  ordered_json j;
  j["command"] = command;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["tool_version"] = tool_version;
  j["wall_seconds"] = wall_seconds;
  j["instances"] = counts.instances;
  j["pass"] = counts.pass;
  j["fail"] = counts.fail;
  j["error"] = counts.error;
  j["skipped"] = counts.skipped;
  j["advisory"] = counts.advisory;
  return j.dump();
}

}  // namespace supercong
