#pragma once

// On-disk persistence of the Bernoulli cache: bernoulli-cache-v1.json in a
// cache directory. Loaded entries are checked against an independent
// recomputation modulo the prime 2^61 - 1 and dropped when they disagree.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "supercong/bernoulli.hpp"

namespace supercong {

inline constexpr const char* kCacheFileName = "bernoulli-cache-v1.json";
inline constexpr int kCacheVersion = 1;

struct CacheLoadStatus {
  bool file_found = false;
  bool version_mismatch = false;
  std::size_t loaded = 0;
  std::size_t rejected = 0;
  std::vector<std::string> warnings;
};

/// Creates the directory if needed and checks that it is writable; throws
/// InputError otherwise.
void prepare_cache_dir(const std::filesystem::path& dir);

CacheLoadStatus load_cache(const std::filesystem::path& dir, BernoulliCache& cache);

/// Writes all entries, sorted, through a temporary file and a rename.
void store_cache(const std::filesystem::path& dir, const BernoulliCache& cache);

/// B_n mod 2^61 - 1 for n = 0..n_max.
std::vector<std::uint64_t> bernoulli_mod_q(int n_max);
/// B_{n,chi} mod 2^61 - 1, given the table above (n_max >= n).
std::uint64_t gen_bernoulli_mod_q(int n, const QuadChar& chi, const std::vector<std::uint64_t>& table);
/// num / den mod 2^61 - 1, or nullopt when q divides den.
std::optional<std::uint64_t> rational_mod_q(const Rational& x);

}  // namespace supercong
