#include "supercong/cache_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "supercong/core_arith.hpp"
#include "supercong/errors.hpp"

namespace supercong {

namespace {

constexpr std::uint64_t kQ = (std::uint64_t{1} << 61) - 1;

std::uint64_t add_q(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kQ ? s - kQ : s;
}

std::uint64_t sub_q(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + (kQ - b); }

std::uint64_t inv_q(std::uint64_t a) { return pow_mod(a, kQ - 2, kQ); }

std::uint64_t signed_mod_q(std::int64_t a) {
  const std::int64_t q = static_cast<std::int64_t>(kQ);
  std::int64_t r = a % q;
  return static_cast<std::uint64_t>(r < 0 ? r + q : r);
}

}  // namespace

std::optional<std::uint64_t> rational_mod_q(const Rational& x) {
  static const BigInt q = []() -> BigInt {
    BigInt v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, 61);
    return v - 1;
  }();
  BigInt n, d;
  mpz_mod(n.get_mpz_t(), x.num().get_mpz_t(), q.get_mpz_t());
  mpz_mod(d.get_mpz_t(), x.den().get_mpz_t(), q.get_mpz_t());
  if (d == 0) return std::nullopt;
  const auto nu = static_cast<std::uint64_t>(mpz_get_ui(n.get_mpz_t()));
  const auto du = static_cast<std::uint64_t>(mpz_get_ui(d.get_mpz_t()));
  return mul_mod(nu, inv_q(du), kQ);
}

std::vector<std::uint64_t> bernoulli_mod_q(int n_max) {
  std::vector<std::uint64_t> inv(static_cast<std::size_t>(n_max) + 3, 0);
  for (std::size_t i = 1; i < inv.size(); ++i) inv[i] = inv_q(i);
  std::vector<std::uint64_t> B(static_cast<std::size_t>(n_max) + 1, 0);
  B[0] = 1;
  for (int m = 1; m <= n_max; ++m) {
    if (m >= 3 && (m & 1)) continue;
    std::uint64_t sum = 0;
    std::uint64_t c = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      sum = add_q(sum, mul_mod(c, B[static_cast<std::size_t>(j)], kQ));
      c = mul_mod(mul_mod(c, static_cast<std::uint64_t>(m + 1 - j), kQ), inv[static_cast<std::size_t>(j) + 1], kQ);
    }
    B[static_cast<std::size_t>(m)] = mul_mod(sub_q(0, sum), inv[static_cast<std::size_t>(m) + 1], kQ);
  }
  return B;
}

std::uint64_t gen_bernoulli_mod_q(int n, const QuadChar& chi, const std::vector<std::uint64_t>& table) {
  if (chi.is_principal()) return n == 1 ? inv_q(2) : table.at(static_cast<std::size_t>(n));
  const std::int64_t f = chi.conductor();
  std::vector<std::uint64_t> S(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t a = 1; a <= f; ++a) {
    const int c = chi(a);
    if (c == 0) continue;
    std::uint64_t pw = 1;
    for (int k = 0; k <= n; ++k) {
      S[static_cast<std::size_t>(k)] = c > 0 ? add_q(S[static_cast<std::size_t>(k)], pw) : sub_q(S[static_cast<std::size_t>(k)], pw);
      pw = mul_mod(pw, static_cast<std::uint64_t>(a), kQ);
    }
  }
  const std::uint64_t fq = signed_mod_q(f);
  std::uint64_t acc = 0, c = 1, fj = 1;
  for (int j = 0; j <= n; ++j) {
    acc = add_q(acc, mul_mod(mul_mod(c, table.at(static_cast<std::size_t>(j)), kQ),
                             mul_mod(fj, S[static_cast<std::size_t>(n - j)], kQ), kQ));
    c = mul_mod(mul_mod(c, static_cast<std::uint64_t>(n - j), kQ), inv_q(static_cast<std::uint64_t>(j) + 1), kQ);
    fj = mul_mod(fj, fq, kQ);
  }
  return mul_mod(acc, inv_q(fq), kQ);
}

void prepare_cache_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InputError(fmt::format("cannot create cache directory {}", dir.string()));
  const auto probe = dir / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "x")) throw InputError(fmt::format("cache directory {} is not writable", dir.string()));
  }
  std::filesystem::remove(probe, ec);
}

CacheLoadStatus load_cache(const std::filesystem::path& dir, BernoulliCache& cache) {
  CacheLoadStatus st;
  const auto path = dir / kCacheFileName;
  std::ifstream in(path);
  if (!in) return st;
  st.file_found = true;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    st.warnings.push_back(fmt::format("{}: unreadable ({}), rebuilding", path.string(), e.what()));
    return st;
  }
  if (!doc.is_object() || doc.value("version", -1) != kCacheVersion || !doc.contains("entries") ||
      !doc["entries"].is_array()) {
    st.version_mismatch = true;
    st.warnings.push_back(fmt::format("{}: version mismatch, ignored", path.string()));
    return st;
  }

  struct Parsed {
    BernoulliCache::Entry entry;
    std::size_t index;
  };
  std::vector<Parsed> parsed;
  int n_max = 0;
  std::size_t index = 0;
  for (const auto& e : doc["entries"]) {
    ++index;
    try {
      BernoulliCache::Entry entry;
      entry.n = e.at("n").get<int>();
      if (entry.n < 0 || entry.n > 100000) throw InputError("index out of range");
      if (!e.at("disc").is_null()) {
        entry.disc = e.at("disc").get<std::int64_t>();
        QuadChar::from_discriminant(*entry.disc);
      }
      const BigInt num(e.at("num").get<std::string>());
      const BigInt den(e.at("den").get<std::string>());
      if (den <= 0) throw InputError("non-positive denominator");
      entry.value = Rational(num, den);
      if (entry.value.num() != num || entry.value.den() != den) throw InputError("fraction not in lowest terms");
      n_max = std::max(n_max, entry.n);
      parsed.push_back({entry, index});
    } catch (const std::exception& ex) {
      ++st.rejected;
      st.warnings.push_back(fmt::format("cache entry {} dropped: {}", index, ex.what()));
    }
  }
  const auto table = bernoulli_mod_q(n_max);
  for (const auto& [entry, idx] : parsed) {
    const auto stored = rational_mod_q(entry.value);
    const std::uint64_t expected =
        entry.disc ? gen_bernoulli_mod_q(entry.n, QuadChar::from_discriminant(*entry.disc), table)
                   : table[static_cast<std::size_t>(entry.n)];
    if (!stored || *stored != expected) {
      ++st.rejected;
      st.warnings.push_back(fmt::format("cache entry {} (n = {}) dropped: value does not match recomputation", idx, entry.n));
      continue;
    }
    cache.insert(entry);
    ++st.loaded;
  }
  return st;
}

void store_cache(const std::filesystem::path& dir, const BernoulliCache& cache) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : cache.snapshot()) {
    nlohmann::json j;
    j["n"] = e.n;
    j["disc"] = e.disc ? nlohmann::json(*e.disc) : nlohmann::json(nullptr);
    j["num"] = e.value.num().get_str();
    j["den"] = e.value.den().get_str();
    entries.push_back(std::move(j));
  }
  nlohmann::json doc;
  doc["version"] = kCacheVersion;
  doc["entries"] = std::move(entries);
  const auto path = dir / kCacheFileName;
  const auto tmp = dir / (std::string(kCacheFileName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InputError(fmt::format("cannot write {}", tmp.string()));
    out << doc.dump() << '\n';
    if (!out) throw InputError(fmt::format("cannot write {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace supercong
