#include "divmean/theta.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace divmean {

namespace {

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && static_cast<u128>(r) * r > v) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::uint64_t saturate(u128 v) {
  return v > ThetaRule::kUnbounded ? ThetaRule::kUnbounded : static_cast<std::uint64_t>(v);
}

std::uint64_t floor_real(double v) {
  if (std::isinf(v) || v >= 1.8e19) return ThetaRule::kUnbounded;
  return static_cast<std::uint64_t>(std::floor(v));
}

// sigma(p^a)
std::uint64_t sigma_prime_power(std::uint64_t p, unsigned a) {
  std::uint64_t pk = 1;
  std::uint64_t s = 1;
  for (unsigned i = 0; i < a; ++i) {
    pk *= p;
    s += pk;
  }
  return s;
}

void require_in_table(std::uint64_t n, const SpfTable& table) {
  if (n < 1 || n > table.limit()) {
    throw RangeError("n = " + std::to_string(n) + " outside table range [1, " + std::to_string(table.limit()) + "]");
  }
}

std::uint64_t tau_of(std::uint64_t n, const SpfTable& table) {
  std::uint64_t t = 1;
  while (n > 1) {
    const std::uint32_t p = table.spf_unchecked(n);
    unsigned a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    t *= a + 1;
  }
  return t;
}

struct ChainAcc {
  u128 count = 0;
  u128 tau_sum = 0;
  CompensatedSum<double> harmonic;

  void add(const ChainNode& node) {
    ++count;
    tau_sum += node.tau;
    harmonic.add(1.0 / static_cast<double>(node.n));
  }
  void merge(const ChainAcc& other) {
    count += other.count;
    tau_sum += other.tau_sum;
    harmonic.merge(other.harmonic);
  }
};

}  // namespace

Ratio Ratio::from_double(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t must be positive and finite");
  int e = 0;
  const double f = std::frexp(t, &e);
  auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
  int shift = e - 53;
  const int tz = std::countr_zero(m);
  m >>= tz;
  shift += tz;
  if (shift >= 0) {
    if (shift >= 64 || m > (ThetaRule::kUnbounded >> shift)) throw ConfigError("t too large");
    return {m << shift, 1};
  }
  if (-shift >= 64) throw ConfigError("t too small");
  return {m, std::uint64_t{1} << -shift};
}

Ratio Ratio::parse(const std::string& text) {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.' && !seen_dot) {
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw ConfigError("not a decimal number: '" + text + "'");
    if (num > (ThetaRule::kUnbounded - 9) / 10 || (seen_dot && den > ThetaRule::kUnbounded / 10)) {
      throw ConfigError("too many digits: '" + text + "'");
    }
    num = num * 10 + static_cast<std::uint64_t>(c - '0');
    if (seen_dot) den *= 10;
    seen_digit = true;
  }
  if (!seen_digit) throw ConfigError("not a decimal number: '" + text + "'");
  const std::uint64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::uint64_t Ratio::floor_times(std::uint64_t n) const {
  return saturate(static_cast<u128>(n) * num / den);
}

ThetaRule ThetaRule::dense(Ratio t) {
  if (t.den == 0 || t.num < 2 * static_cast<u128>(t.den)) throw ConfigError("dense rule needs t >= 2");
  ThetaRule r;
  r.kind_ = ThetaKind::dense;
  r.t_ = t;
  return r;
}

ThetaRule ThetaRule::practical() {
  ThetaRule r;
  r.kind_ = ThetaKind::practical;
  return r;
}

ThetaRule ThetaRule::custom(std::vector<double> values) {
  if (values.size() < 2) throw ConfigError("custom rule needs theta(1)");
  for (std::size_t n = 1; n < values.size(); ++n) {
    if (std::isnan(values[n])) throw ConfigError("theta(" + std::to_string(n) + ") is nan");
  }
  if (!(values[1] >= 2.0)) throw ConfigError("custom rule needs theta(1) >= 2");
  if (values.size() > 2) {
    const SpfTable table = build_spf_table(values.size() - 1);
    for (std::size_t n = 2; n < values.size(); ++n) {
      const auto big = static_cast<double>(table.largest_prime_factor(n));
      if (!(values[n] >= big)) {
        throw ConfigError("custom rule violates theta(n) >= P+(n) at n = " + std::to_string(n));
      }
    }
  }
  ThetaRule r;
  r.kind_ = ThetaKind::custom;
  r.table_ = std::move(values);
  return r;
}

std::string ThetaRule::tag() const {
  switch (kind_) {
    case ThetaKind::dense:
      if (t_.den == 1) return "dense(t=" + std::to_string(t_.num) + ")";
      return "dense(t=" + format_real(t_.value()) + ")";
    case ThetaKind::practical:
      return "practical";
    case ThetaKind::custom:
      return "custom(n<" + std::to_string(table_.size()) + ")";
  }
  return "unknown";
}

std::uint64_t ThetaRule::floor_value(std::uint64_t n, std::uint64_t sigma_n) const {
  switch (kind_) {
    case ThetaKind::dense:
      return t_.floor_times(n);
    case ThetaKind::practical:
      return sigma_n + 1;
    case ThetaKind::custom:
      if (n >= table_.size()) throw RangeError("custom theta undefined at n = " + std::to_string(n));
      return floor_real(table_[n]);
  }
  return 0;
}

double ThetaRule::value(std::uint64_t n, std::uint64_t sigma_n) const {
  switch (kind_) {
    case ThetaKind::dense:
      return static_cast<double>(n) * t_.value();
    case ThetaKind::practical:
      return static_cast<double>(sigma_n) + 1.0;
    case ThetaKind::custom:
      if (n >= table_.size()) throw RangeError("custom theta undefined at n = " + std::to_string(n));
      return table_[n];
  }
  return 0.0;
}

std::uint64_t ThetaRule::prime_bound(std::uint64_t x) const {
  // A child prime satisfies p <= min(theta(n), x/n).
  std::uint64_t bound = x;
  switch (kind_) {
    case ThetaKind::dense:
      bound = saturate(isqrt(saturate(static_cast<u128>(x) * t_.num / t_.den)) + u128{1});
      break;
    case ThetaKind::practical:
      // sigma(n) + 1 <= 6n for n <= 10^10
      bound = isqrt(saturate(static_cast<u128>(x) * 6)) + 1;
      break;
    case ThetaKind::custom:
      break;
  }
  return std::max<std::uint64_t>(std::min(bound, x), 2);
}

bool is_in_B(std::uint64_t n, const ThetaRule& theta, const SpfTable& table) {
  require_in_table(n, table);
  std::uint64_t prefix = 1;
  std::uint64_t sigma_prefix = 1;
  for (const PrimePower& pp : table.factorize(n)) {
    if (pp.prime > theta.floor_value(prefix, sigma_prefix)) return false;
    for (unsigned i = 0; i < pp.exponent; ++i) prefix *= pp.prime;
    sigma_prefix *= sigma_prime_power(pp.prime, pp.exponent);
  }
  return true;
}

bool is_t_dense_by_divisors(std::uint64_t n, Ratio t, const SpfTable& table) {
  require_in_table(n, table);
  const std::vector<std::uint64_t> d = divisors_sorted(n, table);
  for (std::size_t j = 0; j + 1 < d.size(); ++j) {
    if (static_cast<u128>(d[j + 1]) * t.den > static_cast<u128>(d[j]) * t.num) return false;
  }
  return true;
}

bool is_practical_by_subset_sum(std::uint64_t n, const SpfTable& table) {
  if (n > kSubsetSumScale) {
    throw RangeError("subset-sum check limited to n <= " + std::to_string(kSubsetSumScale));
  }
  require_in_table(n, table);
  const std::size_t words = n / 64 + 1;
  std::vector<std::uint64_t> reach(words, 0);
  reach[0] = 1;
  for (std::uint64_t d : divisors_sorted(n, table)) {
    const std::size_t ws = d / 64;
    const unsigned bs = d % 64;
    for (std::size_t i = words; i-- > ws;) {
      std::uint64_t v = reach[i - ws] << bs;
      if (bs != 0 && i > ws) v |= reach[i - ws - 1] >> (64 - bs);
      reach[i] |= v;
    }
  }
  for (std::uint64_t m = 1; m <= n; ++m) {
    if (((reach[m / 64] >> (m % 64)) & 1) == 0) return false;
  }
  return true;
}

NrFactor factor_nr(std::uint64_t m, const ThetaRule& theta, const SpfTable& table) {
  require_in_table(m, table);
  std::uint64_t prefix = 1;
  std::uint64_t sigma_prefix = 1;
  for (const PrimePower& pp : table.factorize(m)) {
    if (pp.prime > theta.floor_value(prefix, sigma_prefix)) return {prefix, m / prefix};
    for (unsigned i = 0; i < pp.exponent; ++i) prefix *= pp.prime;
    sigma_prefix *= sigma_prime_power(pp.prime, pp.exponent);
  }
  return {m, 1};
}

PrimeList chain_primes(const ThetaRule& theta, std::uint64_t x) {
  return build_prime_list(theta.prime_bound(std::max<std::uint64_t>(x, 1)));
}

std::vector<std::uint64_t> collect_B(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes) {
  std::vector<std::uint64_t> out;
  generate_B(theta, x, primes, [&out](const ChainNode& node) { out.push_back(node.n); });
  std::sort(out.begin(), out.end());
  return out;
}

SeqStats rough_stats(std::uint64_t x, double y, const SpfTable& table) {
  if (x < 1) throw RangeError("x must be >= 1");
  if (!(y >= 2.0)) throw RangeError("y must be >= 2");
  if (x > table.limit()) {
    throw RangeError("x = " + std::to_string(x) + " exceeds sieve limit " + std::to_string(table.limit()));
  }
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const std::uint64_t chunks = (x + kChunk - 1) / kChunk;
  auto parts = parallel_map(chunks, [&](std::size_t c) {
    ChainAcc acc;
    const std::uint64_t lo = std::max<std::uint64_t>(2, c * kChunk + 1);
    const std::uint64_t hi = std::min<std::uint64_t>(x, (c + 1) * kChunk);
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (static_cast<double>(table.spf_unchecked(n)) <= y) continue;
      ++acc.count;
      acc.tau_sum += tau_of(n, table);
      acc.harmonic.add(1.0 / static_cast<double>(n));
    }
    return acc;
  });
  ChainAcc total;
  total.add(ChainNode{});
  for (const ChainAcc& p : parts) total.merge(p);
  return {x, total.count, total.tau_sum, total.harmonic.value()};
}

SeqStats chain_stats(const ThetaRule& theta, std::uint64_t x, const PrimeList& primes) {
  if (x < 1) throw RangeError("x must be >= 1");
  const ChainAcc acc = accumulate_chain<ChainAcc>(theta, x, primes);
  return {x, acc.count, acc.tau_sum, acc.harmonic.value()};
}

SeqStats dense_stats(std::uint64_t x, Ratio t) {
  const ThetaRule theta = ThetaRule::dense(t);
  return chain_stats(theta, x, chain_primes(theta, x));
}

SeqStats practical_stats(std::uint64_t x) {
  const ThetaRule theta = ThetaRule::practical();
  return chain_stats(theta, x, chain_primes(theta, x));
}

FunceqSides funceq_sides(const ThetaRule& theta, std::uint64_t x, const SpfTable& table) {
  if (x < 1) throw RangeError("x must be >= 1");
  if (x > table.limit()) {
    throw RangeError("x = " + std::to_string(x) + " exceeds sieve limit " + std::to_string(table.limit()));
  }
  FunceqSides out;
  out.lhs_count = x;
  out.lhs_tau = 1;
  for (std::uint64_t m = 2; m <= x; ++m) out.lhs_tau += tau_of(m, table);

  const PrimeList primes = chain_primes(theta, x);
  std::vector<ChainNode> nodes;
  generate_B(theta, x, primes, [&nodes](const ChainNode& node) { nodes.push_back(node); });
  std::sort(nodes.begin(), nodes.end(), [](const ChainNode& a, const ChainNode& b) { return a.n < b.n; });

  struct Part {
    u128 count = 0;
    u128 tau = 0;
  };
  auto parts = parallel_map(nodes.size(), [&](std::size_t i) {
    const ChainNode& node = nodes[i];
    const std::uint64_t bound = theta.floor_value(node.n, node.sigma);
    const std::uint64_t rmax = x / node.n;
    u128 cnt = 1;
    u128 tsum = 1;
    const std::uint64_t rmin = bound >= rmax ? rmax + 1 : std::max<std::uint64_t>(bound, 1) + 1;
    for (std::uint64_t r = rmin; r <= rmax; ++r) {
      if (table.spf_unchecked(r) <= bound) continue;
      ++cnt;
      tsum += tau_of(r, table);
    }
    return Part{cnt, static_cast<u128>(node.tau) * tsum};
  });
  for (const Part& p : parts) {
    out.rhs_count += p.count;
    out.rhs_tau += p.tau;
  }
  return out;
}

}  // namespace divmean
