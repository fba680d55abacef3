#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "divmean/arith.hpp"
#include "divmean/errors.hpp"
#include "divmean/numeric.hpp"
#include "divmean/parallel.hpp"

namespace divmean {

// Non-negative rational num/den, used for the dense parameter t so that
// p <= n t is decided exactly.
struct Ratio {
  std::uint64_t num = 2;
  std::uint64_t den = 1;

  // Exact value of the double (dyadic rational).
  static Ratio from_double(double t);
  // Decimal literal such as "2.5" or "10"; no exponents.
  static Ratio parse(const std::string& text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // floor(n * num / den)
  std::uint64_t floor_times(std::uint64_t n) const;
};

enum class ThetaKind { dense, practical, custom };

// theta with theta(1) >= 2 and theta(n) >= P^+(n). The set B_theta holds 1 and
// every n whose ascending prime powers p_i^{a_i} satisfy p_i <= theta(p_1^{a_1} ... p_{i-1}^{a_{i-1}}).
class ThetaRule {
 public:
  static constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

  // theta(n) = n t, t >= 2.
  static ThetaRule dense(Ratio t);
  static ThetaRule dense(double t) { return dense(Ratio::from_double(t)); }
  // theta(n) = sigma(n) + 1.
  static ThetaRule practical();
  // theta(n) = values[n] for 1 <= n < values.size(); +inf allowed. Throws
  // ConfigError unless theta(1) >= 2 and theta(n) >= P^+(n) throughout.
  static ThetaRule custom(std::vector<double> values);

  ThetaKind kind() const { return kind_; }
  const Ratio& t() const { return t_; }
  std::string tag() const;

  // floor(theta(n)), kUnbounded for +inf. sigma_n must be sigma(n).
  std::uint64_t floor_value(std::uint64_t n, std::uint64_t sigma_n) const;
  double value(std::uint64_t n, std::uint64_t sigma_n) const;

  // Primes needed to extend chains up to x: every admissible prime lies below this.
  std::uint64_t prime_bound(std::uint64_t x) const;

 private:
  ThetaKind kind_ = ThetaKind::dense;
  Ratio t_;
  std::vector<double> table_;
};

struct SeqStats {
  std::uint64_t x = 0;
  u128 count = 0;
  u128 tau_sum = 0;
  double harmonic = 0.0;  // sum of 1/n
};

// One element of B with the data needed to extend it.
struct ChainNode {
  std::uint64_t n = 1;
  std::uint64_t tau = 1;
  std::uint64_t sigma = 1;
  std::size_t top = kNoPrime;  // index of P^+(n) in the prime list

  static constexpr std::size_t kNoPrime = std::numeric_limits<std::size_t>::max();
};

bool is_in_B(std::uint64_t n, const ThetaRule& theta, const SpfTable& table);
bool is_t_dense_by_divisors(std::uint64_t n, Ratio t, const SpfTable& table);
inline bool is_t_dense_by_divisors(std::uint64_t n, double t, const SpfTable& table) {
  return is_t_dense_by_divisors(n, Ratio::from_double(t), table);
}

inline constexpr std::uint64_t kSubsetSumScale = 1'000'000;
// Every m <= n is a sum of distinct divisors of n (bitset DP); n <= 10^6.
bool is_practical_by_subset_sum(std::uint64_t n, const SpfTable& table);

// m = n r with n in B and r = 1 or P^-(r) > theta(n).
struct NrFactor {
  std::uint64_t n;
  std::uint64_t r;
};
NrFactor factor_nr(std::uint64_t m, const ThetaRule& theta, const SpfTable& table);

// Calls fn(child) for every child of `node` inside [1, x]: node * p^a with
// P^+(node) < p <= theta(node), a >= 1.
template <class Fn>
void for_each_child(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes, const ChainNode& node,
                    Fn&& fn) {
  const std::uint64_t cap = std::min(theta.floor_value(node.n, node.sigma), x / node.n);
  std::size_t j = node.top == ChainNode::kNoPrime ? 0 : node.top + 1;
  for (; j < primes.size(); ++j) {
    const std::uint64_t p = primes[j];
    if (p > cap) return;
    ChainNode child{node.n, node.tau, node.sigma, j};
    std::uint64_t pk = 1;
    std::uint64_t sigma_pk = 1;
    unsigned a = 0;
    while (child.n <= x / p) {
      child.n *= p;
      pk *= p;
      sigma_pk += pk;
      ++a;
      child.tau = node.tau * (a + 1);
      child.sigma = node.sigma * sigma_pk;
      fn(child);
    }
  }
  if (cap > primes.limit()) {
    throw RangeError("chain enumeration needs primes up to " + std::to_string(cap) + ", list stops at " +
                     std::to_string(primes.limit()));
  }
}

// Depth-first walk over `root` and all its descendants in B(x).
template <class Visit>
void walk_subtree(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes, const ChainNode& root,
                  Visit&& visit) {
  std::vector<ChainNode> stack{root};
  while (!stack.empty()) {
    const ChainNode node = stack.back();
    stack.pop_back();
    visit(node);
    for_each_child(theta, x, primes, node, [&stack](const ChainNode& c) { stack.push_back(c); });
  }
}

// Streams every element of B(x) exactly once, in depth-first order.
template <class Sink>
void generate_B(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes, Sink&& sink) {
  if (x < 1) return;
  walk_subtree(theta, x, primes, ChainNode{}, [&sink](const ChainNode& node) { sink(node); });
}

// Reduces acc.add(node) over B(x). Elements <= sqrt(x) are visited in one
// sequential pass; the subtrees hanging off each of them above sqrt(x) form
// the parallel tasks. Task results are merged in task order, so the result
// does not depend on the thread count.
template <class Acc>
Acc accumulate_chain(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes) {
  Acc head;
  if (x < 1) return head;
  auto split = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  split = std::max<std::uint64_t>(split, 1);
  std::vector<ChainNode> parents;
  std::vector<ChainNode> stack{ChainNode{}};
  while (!stack.empty()) {
    const ChainNode node = stack.back();
    stack.pop_back();
    head.add(node);
    parents.push_back(node);
    for_each_child(theta, x, primes, node, [&](const ChainNode& c) {
      if (c.n <= split) stack.push_back(c);
    });
  }
  std::vector<Acc> parts = parallel_map(parents.size(), [&](std::size_t i) {
    Acc acc;
    for_each_child(theta, x, primes, parents[i], [&](const ChainNode& c) {
      if (c.n > split) walk_subtree(theta, x, primes, c, [&acc](const ChainNode& d) { acc.add(d); });
    });
    return acc;
  });
  for (const Acc& part : parts) head.merge(part);
  return head;
}

// Prime list sufficient for chain enumeration of B(x) under theta.
PrimeList chain_primes(const ThetaRule& theta, std::uint64_t x);

// Sorted B(x).
std::vector<std::uint64_t> collect_B(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes);

// Exact Phi(x,y), S(x,y) and sum 1/n over n <= x with P^-(n) > y (n = 1 included).
SeqStats rough_stats(std::uint64_t x, double y, const SpfTable& table);

// Count, tau-sum and harmonic sum over B(x).
SeqStats chain_stats(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes);
SeqStats dense_stats(std::uint64_t x, Ratio t);
inline SeqStats dense_stats(std::uint64_t x, double t) { return dense_stats(x, Ratio::from_double(t)); }
SeqStats practical_stats(std::uint64_t x);

// Both sides of sum_{m<=x} f(m) = sum_{n in B(x)} f(n) (1 + sum_{2<=r<=x/n, P^-(r)>theta(n)} f(r))
// for f = 1 and f = tau.
struct FunceqSides {
  u128 lhs_count = 0;
  u128 rhs_count = 0;
  u128 lhs_tau = 0;
  u128 rhs_tau = 0;

  bool holds() const { return lhs_count == rhs_count && lhs_tau == rhs_tau; }
};
FunceqSides funceq_sides(const ThetaRule& theta, std::uint64_t x, const SpfTable& table);

}  // namespace divmean
