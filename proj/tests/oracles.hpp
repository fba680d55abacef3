#pragma once

#include <cstdint>
#include <vector>

// Brute-force reference implementations, independent of the library.
namespace oracle {

inline std::uint64_t smallest_factor(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return d;
  }
  return n;
}

inline bool is_prime(std::uint64_t n) { return n >= 2 && smallest_factor(n) == n; }

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> lo, hi;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      lo.push_back(d);
      if (d != n / d) hi.push_back(n / d);
    }
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

inline std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      best = d;
      n /= d;
    }
  }
  return n > 1 ? n : best;
}

// Every m <= n is a sum of distinct divisors: plain boolean knapsack.
inline bool practical(std::uint64_t n) {
  std::vector<char> reach(n + 1, 0);
  reach[0] = 1;
  for (std::uint64_t d : divisors(n)) {
    for (std::uint64_t s = n; s >= d; --s) {
      if (reach[s - d]) reach[s] = 1;
    }
  }
  for (std::uint64_t m = 1; m <= n; ++m) {
    if (!reach[m]) return false;
  }
  return true;
}

// Consecutive divisor ratios bounded by num/den.
inline bool dense(std::uint64_t n, std::uint64_t num, std::uint64_t den) {
  const auto d = divisors(n);
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i + 1] * den > d[i] * num) return false;
  }
  return true;
}

}  // namespace oracle
