#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "divmean/numeric.hpp"

namespace divmean {

// Default ceiling on SpfTable entries (4 bytes each).
inline constexpr std::uint64_t kDefaultSpfBudget = std::uint64_t{1} << 30;

// Above this many entries the table is filled segment by segment.
inline constexpr std::uint64_t kLinearSieveCeiling = std::uint64_t{1} << 27;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
};

// Smallest prime factor for every 2 <= n <= limit. Immutable once built.
class SpfTable {
 public:
  SpfTable() = default;
  SpfTable(std::uint64_t limit, std::vector<std::uint32_t> spf) : limit_(limit), spf_(std::move(spf)) {}

  std::uint64_t limit() const { return limit_; }

  // P^-(n); throws RangeError outside [2, limit].
  std::uint64_t smallest_prime_factor(std::uint64_t n) const;
  // Unchecked; n must be in [2, limit].
  std::uint32_t spf_unchecked(std::uint64_t n) const { return spf_[n]; }
  bool is_prime(std::uint64_t n) const;

  // Ascending prime factorization; empty for n = 1.
  std::vector<PrimePower> factorize(std::uint64_t n) const;
  // P^+(n); 1 for n = 1.
  std::uint64_t largest_prime_factor(std::uint64_t n) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

// Linear sieve up to kLinearSieveCeiling entries, segmented fill above it.
SpfTable build_spf_table(std::uint64_t limit, std::uint64_t budget = kDefaultSpfBudget);
// Forces the segmented fill regardless of size (for cross-checking).
SpfTable build_spf_table_segmented(std::uint64_t limit, std::uint64_t segment = std::uint64_t{1} << 18);

std::uint64_t tau(std::uint64_t n, const SpfTable& table);
std::uint64_t sigma(std::uint64_t n, const SpfTable& table);
std::vector<std::uint64_t> divisors_sorted(std::uint64_t n, const SpfTable& table);

// All primes <= limit, ascending.
class PrimeList {
 public:
  PrimeList() = default;
  PrimeList(std::uint64_t limit, std::vector<std::uint32_t> primes) : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  std::uint64_t operator[](std::size_t i) const { return primes_[i]; }
  // Number of primes <= y; y must not exceed limit().
  std::size_t count_upto(double y) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
};

// Segmented Eratosthenes; limit < 2^32.
PrimeList build_prime_list(std::uint64_t limit);
PrimeList primes_from_table(const SpfTable& table);

// prod_{p <= y} (1 - 1/p), compensated log-sum; throws RangeError if y > limit.
double mertens_product(double y, const PrimeList& primes);

// Prefix tables over a PrimeList for repeated queries:
//   log prod_{p<=y}(1-1/p)    and    sum_{p<=y} log p / (p-1).
class MertensTable {
 public:
  explicit MertensTable(PrimeList primes);

  const PrimeList& primes() const { return primes_; }
  double log_product(double y) const;
  double product(double y) const { return std::exp(log_product(y)); }
  double log_weight_sum(double y) const;

 private:
  std::size_t index(double y) const;

  PrimeList primes_;
  std::vector<double> log_prod_;      // entry k: over the first k primes
  std::vector<double> log_weight_;
};

}  // namespace divmean
