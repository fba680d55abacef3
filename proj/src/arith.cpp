#include "divmean/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divmean/errors.hpp"

namespace divmean {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_range(std::uint64_t n, std::uint64_t limit, const char* what) {
  if (n < 1 || n > limit) {
    throw RangeError(std::string(what) + ": n=" + std::to_string(n) + " outside [1, " +
                     std::to_string(limit) + "]");
  }
}

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

}  // namespace

std::uint64_t SpfTable::smallest_prime_factor(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw RangeError("smallest_prime_factor: n=" + std::to_string(n) + " outside [2, " +
                     std::to_string(limit_) + "]");
  }
  return spf_[n];
}

bool SpfTable::is_prime(std::uint64_t n) const {
  if (n < 2) return false;
  return smallest_prime_factor(n) == n;
}

std::vector<PrimePower> SpfTable::factorize(std::uint64_t n) const {
  check_range(n, limit_, "factorize");
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint64_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

std::uint64_t SpfTable::largest_prime_factor(std::uint64_t n) const {
  check_range(n, limit_, "largest_prime_factor");
  std::uint64_t last = 1;
  while (n > 1) {
    last = spf_[n];
    n /= last;
  }
  return last;
}

SpfTable build_spf_table(std::uint64_t limit, std::uint64_t budget) {
  if (limit < 2) throw RangeError("build_spf_table: limit must be >= 2");
  if (limit >= (std::uint64_t{1} << 32)) throw ResourceError("build_spf_table: limit must be < 2^32");
  if (limit + 1 > budget) {
    throw ResourceError("build_spf_table: limit " + std::to_string(limit) + " exceeds budget of " +
                        std::to_string(budget) + " entries");
  }
  if (limit + 1 > kLinearSieveCeiling) return build_spf_table_segmented(limit);

  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint64_t cap = spf[i];
    for (std::uint32_t p : primes) {
      if (p > cap || i * p > limit) break;
      spf[i * p] = p;
    }
  }
  return SpfTable(limit, std::move(spf));
}

SpfTable build_spf_table_segmented(std::uint64_t limit, std::uint64_t segment) {
  if (limit < 2) throw RangeError("build_spf_table: limit must be >= 2");
  const std::vector<std::uint32_t> base = small_primes(isqrt(limit));
  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(p);
      }
    }
    for (std::uint64_t j = lo; j <= hi; ++j) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(j);
    }
  }
  return SpfTable(limit, std::move(spf));
}

std::uint64_t tau(std::uint64_t n, const SpfTable& table) {
  check_range(n, table.limit(), "tau");
  std::uint64_t result = 1;
  while (n > 1) {
    const std::uint64_t p = table.spf_unchecked(n);
    std::uint64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    result *= e + 1;
  }
  return result;
}

std::uint64_t sigma(std::uint64_t n, const SpfTable& table) {
  check_range(n, table.limit(), "sigma");
  std::uint64_t result = 1;
  while (n > 1) {
    const std::uint64_t p = table.spf_unchecked(n);
    std::uint64_t term = 1;
    std::uint64_t pk = 1;
    while (n % p == 0) {
      n /= p;
      pk *= p;
      term += pk;
    }
    result *= term;
  }
  return result;
}

std::vector<std::uint64_t> divisors_sorted(std::uint64_t n, const SpfTable& table) {
  std::vector<std::uint64_t> divs{1};
  for (const PrimePower& pp : table.factorize(n)) {
    const std::size_t base = divs.size();
    std::uint64_t pk = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::size_t PrimeList::count_upto(double y) const {
  if (y > static_cast<double>(limit_)) {
    throw RangeError("prime list covers p <= " + std::to_string(limit_) + ", asked for y=" + format_real(y));
  }
  if (y < 2.0) return 0;
  const auto cut = static_cast<std::uint64_t>(std::floor(y));
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), cut) - primes_.begin());
}

PrimeList build_prime_list(std::uint64_t limit) {
  if (limit >= (std::uint64_t{1} << 32)) throw ResourceError("build_prime_list: limit must be < 2^32");
  std::vector<std::uint32_t> out;
  if (limit < 2) return PrimeList(limit, std::move(out));
  out.push_back(2);
  const std::vector<std::uint32_t> base = small_primes(isqrt(limit));
  // Odd numbers only: index i <-> lo + 2i.
  constexpr std::uint64_t kSegment = std::uint64_t{1} << 18;
  std::vector<char> composite(kSegment);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegment) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSegment - 1);
    std::fill(composite.begin(), composite.end(), 0);
    for (std::size_t k = 1; k < base.size(); ++k) {
      const std::uint64_t p = base[k];
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = start; j <= hi; j += 2 * p) composite[(j - lo) / 2] = 1;
    }
    for (std::uint64_t j = lo; j <= hi; j += 2) {
      if (!composite[(j - lo) / 2]) out.push_back(static_cast<std::uint32_t>(j));
    }
  }
  return PrimeList(limit, std::move(out));
}

PrimeList primes_from_table(const SpfTable& table) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t n = 2; n <= table.limit(); ++n) {
    if (table.spf_unchecked(n) == n) out.push_back(static_cast<std::uint32_t>(n));
  }
  return PrimeList(table.limit(), std::move(out));
}

double mertens_product(double y, const PrimeList& primes) {
  const std::size_t k = primes.count_upto(y);
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < k; ++i) acc.add(std::log1p(-1.0 / static_cast<double>(primes[i])));
  return std::exp(acc.value());
}

MertensTable::MertensTable(PrimeList primes) : primes_(std::move(primes)) {
  log_prod_.reserve(primes_.size() + 1);
  log_weight_.reserve(primes_.size() + 1);
  CompensatedSum<double> prod;
  CompensatedSum<double> weight;
  log_prod_.push_back(0.0);
  log_weight_.push_back(0.0);
  for (std::uint32_t p32 : primes_.primes()) {
    const double p = p32;
    prod.add(std::log1p(-1.0 / p));
    weight.add(std::log(p) / (p - 1.0));
    log_prod_.push_back(prod.value());
    log_weight_.push_back(weight.value());
  }
}

std::size_t MertensTable::index(double y) const { return primes_.count_upto(y); }

double MertensTable::log_product(double y) const { return log_prod_[index(y)]; }

double MertensTable::log_weight_sum(double y) const { return log_weight_[index(y)]; }

}  // namespace divmean
