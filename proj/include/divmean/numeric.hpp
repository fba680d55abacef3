#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace divmean {

using u128 = unsigned __int128;
using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline const double kExpMinusGamma = std::exp(-kEulerGamma);
inline const double kExpMinus2Gamma = std::exp(-2.0 * kEulerGamma);

// Neumaier-compensated running sum. Merging keeps the compensation term.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached rules for n in [2, 64]; thread-safe after first use.
const GaussRule& gauss_legendre(int n);

// Integrates f on [a, b] using `pieces` equal sub-panels of an n-point rule.
template <class F>
auto integrate_gauss(F&& f, double a, double b, int n = 16, int pieces = 1) {
  const GaussRule& rule = gauss_legendre(n);
  using R = decltype(f(a));
  CompensatedSum<R> acc;
  const double width = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc.add(f(mid + half * rule.nodes[i]) * (half * rule.weights[i]));
    }
  }
  return acc.value();
}

// Integrates f on [a, b], splitting at the sorted breakpoints that fall inside.
template <class F>
auto integrate_panels(F&& f, std::span<const double> breaks, int n = 16, double max_width = 0.25) {
  using R = decltype(f(breaks[0]));
  CompensatedSum<R> acc;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (!(hi > lo)) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    acc.add(integrate_gauss(f, lo, hi, n, pieces));
  }
  return acc.value();
}

// 15 significant digits, locale independent; "nan" / "inf" / "-inf" spelled out.
std::string format_real(double x);

std::string to_string_u128(u128 v);

// 2^v / (7 Gamma(v+1)): envelope for |xi - (v+2)e^{-2 gamma}| and |xi' - e^{-2 gamma}|.
inline double xi_envelope(double v) {
  return std::exp(v * std::log(2.0) - std::lgamma(v + 1.0)) / 7.0;
}

}  // namespace divmean
