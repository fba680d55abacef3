#include "divmean/special.hpp"

#include <algorithm>
#include <cmath>

#include "divmean/errors.hpp"
#include "divmean/numeric.hpp"

namespace divmean {

namespace {

double omega_piece_1(double u) { return 1.0 / u; }
double omega_piece_2(double u) { return (1.0 + std::log(u - 1.0)) / u; }
double omega_beyond(double) { return kExpMinusGamma; }

double xi_piece_1(double u) { return 2.0 / u; }
double xi_piece_2(double u) { return (4.0 * std::log(u - 1.0) + 2.0) / u; }
double xi_beyond(double u) { return (u + 2.0) * kExpMinus2Gamma; }

double lambda_piece(double v) { return v; }

// Integral over grid cell [j, j+1] from the cubic through four nodes of the
// same unit panel.
double cell_integral(std::span<const double> f, std::size_t j, int per_unit) {
  const double h = 1.0 / per_unit;
  const std::size_t local = j % per_unit;
  if (local == 0) return h * (9 * f[j] + 19 * f[j + 1] - 5 * f[j + 2] + f[j + 3]) / 24.0;
  if (local + 1 == static_cast<std::size_t>(per_unit)) {
    return h * (f[j - 2] - 5 * f[j - 1] + 19 * f[j] + 9 * f[j + 1]) / 24.0;
  }
  return h * (-f[j - 1] + 13 * f[j] + 13 * f[j + 1] - f[j + 2]) / 24.0;
}

// Tabulates f on [1, upper] given closed forms on [1, 3) and
//   u f(u) = c + a * int_1^{u-1} f(t) dt      (u >= 2).
// The delay is one full unit, so every new node only needs history.
std::vector<double> march_delay(double (*piece1)(double), double (*piece2)(double), double c, double a,
                                double upper, int per_unit) {
  const auto count = static_cast<std::size_t>(std::llround((upper - 1.0) * per_unit)) + 1;
  std::vector<double> f(count);
  std::vector<double> cum(count, 0.0);
  std::size_t have = 0;  // cum[0..have] valid
  for (std::size_t i = 0; i < count; ++i) {
    const double u = 1.0 + static_cast<double>(i) / per_unit;
    if (u < 2.0) {
      f[i] = piece1(u);
    } else if (u < 3.0) {
      f[i] = piece2(u);
    } else {
      const std::size_t m = i - per_unit;
      while (have < m) {
        cum[have + 1] = cum[have] + cell_integral(f, have, per_unit);
        ++have;
      }
      f[i] = (c + a * cum[m]) / u;
    }
  }
  return f;
}

// Max difference between a grid and its double-step counterpart, plus the
// interpolation defect of the coarse grid at the fine-only nodes scaled to
// the fine step.
double halving_error(const UniformGrid& fine, const UniformGrid& coarse) {
  double node_err = 0.0;
  double interp_err = 0.0;
  for (std::size_t i = 0; i < fine.values.size(); ++i) {
    if (i % 2 == 0) {
      const std::size_t k = i / 2;
      if (k < coarse.values.size()) node_err = std::max(node_err, std::abs(fine.values[i] - coarse.values[k]));
    } else {
      const double u = fine.node(i);
      if (u > coarse.end()) continue;
      const double guess = interpolate_panel(coarse.values, coarse.start, coarse.per_unit, u);
      interp_err = std::max(interp_err, std::abs(guess - fine.values[i]));
    }
  }
  // 4th-order scheme: the fine-grid error is about 1/15 (nodes) and 1/16
  // (interpolation) of the measured differences; keep the full node difference.
  return node_err + interp_err / 16.0;
}

UniformGrid delay_grid(double (*p1)(double), double (*p2)(double), double c, double a, double upper,
                       int per_unit) {
  UniformGrid g;
  g.start = 1.0;
  g.per_unit = per_unit;
  g.values = march_delay(p1, p2, c, a, upper, per_unit);
  return g;
}

UniformGrid lambda_grid(const PiecewiseFn& xi, double upper, int per_unit) {
  const auto count = static_cast<std::size_t>(std::llround(upper * per_unit)) + 1;
  UniformGrid g;
  g.start = 0.0;
  g.per_unit = per_unit;
  g.values.resize(count);
  std::vector<double> breaks;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = static_cast<double>(i) / per_unit;
    if (v <= 1.0) {
      g.values[i] = v;
      continue;
    }
    // Nodes up to i-1 are final; the integrand only reaches u <= (v-1)/2.
    std::span<const double> done(g.values.data(), i);
    auto lam = [&](double u) { return u <= 1.0 ? u : interpolate_panel(done, 0.0, per_unit, u); };
    const double top = 0.5 * (v - 1.0);
    breaks.clear();
    breaks.push_back(0.0);
    breaks.push_back(top);
    for (double k = 1.0; k < top; k += 1.0) breaks.push_back(k);
    // (v-u)/(u+1) crosses the integer k at u = (v-k)/(k+1).
    for (int k = 2; k < v; ++k) {
      const double uk = (v - k) / (k + 1.0);
      if (uk > 0.0 && uk < top) breaks.push_back(uk);
    }
    std::sort(breaks.begin(), breaks.end());
    auto integrand = [&](double u) { return lam(u) * xi((v - u) / (u + 1.0)) / (u + 1.0); };
    g.values[i] = v - integrate_panels(integrand, breaks, 10, 0.25);
  }
  return g;
}

}  // namespace

double interpolate_panel(std::span<const double> values, double start, int per_unit, double u) {
  const double t = u - start;
  const auto panels = static_cast<long>((values.size() - 1) / per_unit);
  long p = static_cast<long>(std::floor(t));
  if (p >= panels) p = panels - 1;
  if (p < 0) p = 0;
  const double local = (t - static_cast<double>(p)) * per_unit;
  long i0 = static_cast<long>(std::floor(local)) - 1;
  i0 = std::clamp(i0, 0L, static_cast<long>(per_unit) - 3);
  const std::size_t base = static_cast<std::size_t>(p * per_unit + i0);
  if (base + 3 >= values.size()) {
    throw RangeError("interpolate_panel: u=" + format_real(u) + " needs nodes beyond the grid");
  }
  const double x = local - static_cast<double>(i0);
  const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double l1 = x * (x - 2) * (x - 3) / 2.0;
  const double l2 = -x * (x - 1) * (x - 3) / 2.0;
  const double l3 = x * (x - 1) * (x - 2) / 6.0;
  return l0 * values[base] + l1 * values[base + 1] + l2 * values[base + 2] + l3 * values[base + 3];
}

PiecewiseFn::PiecewiseFn(std::string name, double support_start, std::vector<ExactPiece> pieces,
                         UniformGrid grid, double (*beyond)(double))
    : name_(std::move(name)),
      support_start_(support_start),
      pieces_(std::move(pieces)),
      grid_(std::move(grid)),
      beyond_(beyond) {
  cumulative_.assign(grid_.values.size(), 0.0);
  for (std::size_t j = 0; j + 1 < grid_.values.size(); ++j) {
    cumulative_[j + 1] = cumulative_[j] + cell_integral(grid_.values, j, grid_.per_unit);
  }
}

double PiecewiseFn::operator()(double u) const {
  if (u < support_start_) return 0.0;
  for (const ExactPiece& piece : pieces_) {
    if (u >= piece.lo && u < piece.hi) return piece.eval(u);
  }
  if (u <= grid_.end()) return interpolate_panel(grid_.values, grid_.start, grid_.per_unit, u);
  if (beyond_) return beyond_(u);
  throw RangeError(name_ + ": argument " + format_real(u) + " beyond grid end " + format_real(grid_.end()));
}

double PiecewiseFn::err_at(double u) const {
  if (u < support_start_) return 0.0;
  for (const ExactPiece& piece : pieces_) {
    if (u >= piece.lo && u < piece.hi) return 0.0;
  }
  return err_budget_;
}

double PiecewiseFn::integral_to(double u) const {
  if (u <= grid_.start) return 0.0;
  if (u > grid_.end()) throw RangeError(name_ + ": integral beyond grid end");
  const double pos = (u - grid_.start) * grid_.per_unit;
  auto j = static_cast<std::size_t>(std::floor(pos));
  if (j >= cumulative_.size() - 1) j = cumulative_.size() - 1;
  const double node = grid_.node(j);
  if (u == node) return cumulative_[j];
  // The 2-point Gauss rule is exact on the interpolating cubic.
  return cumulative_[j] + integrate_gauss([this](double t) { return (*this)(t); }, node, u, 2);
}

PiecewiseFn build_omega(const GridOptions& opts) {
  std::vector<ExactPiece> pieces{{1.0, 2.0, omega_piece_1}, {2.0, 3.0, omega_piece_2}};
  UniformGrid fine = delay_grid(omega_piece_1, omega_piece_2, 1.0, 1.0, opts.omega_upper, opts.per_unit);
  double err = 0.0;
  if (opts.estimate_error) {
    UniformGrid coarse = delay_grid(omega_piece_1, omega_piece_2, 1.0, 1.0, opts.omega_upper, opts.per_unit / 2);
    err = halving_error(fine, coarse);
  }
  PiecewiseFn fn("omega", 1.0, std::move(pieces), std::move(fine), omega_beyond);
  fn.set_err_budget(err);
  return fn;
}

PiecewiseFn build_xi(const GridOptions& opts) {
  std::vector<ExactPiece> pieces{{1.0, 2.0, xi_piece_1}, {2.0, 3.0, xi_piece_2}};
  UniformGrid fine = delay_grid(xi_piece_1, xi_piece_2, 2.0, 2.0, opts.xi_upper, opts.per_unit);
  double err = 0.0;
  if (opts.estimate_error) {
    UniformGrid coarse = delay_grid(xi_piece_1, xi_piece_2, 2.0, 2.0, opts.xi_upper, opts.per_unit / 2);
    err = halving_error(fine, coarse);
  }
  PiecewiseFn fn("xi", 1.0, std::move(pieces), std::move(fine), xi_beyond);
  fn.set_err_budget(err);
  return fn;
}

PiecewiseFn build_lambda(const PiecewiseFn& xi, const GridOptions& opts) {
  std::vector<ExactPiece> pieces{{0.0, 1.0, lambda_piece}};
  UniformGrid fine = lambda_grid(xi, opts.lambda_upper, opts.per_unit);
  double err = 0.0;
  if (opts.estimate_error) {
    GridOptions half = opts;
    half.per_unit = opts.per_unit / 2;
    half.estimate_error = false;
    const PiecewiseFn xi_coarse = build_xi(half);
    UniformGrid coarse = lambda_grid(xi_coarse, opts.lambda_upper, half.per_unit);
    err = halving_error(fine, coarse);
  }
  PiecewiseFn fn("lambda", 0.0, std::move(pieces), std::move(fine), nullptr);
  fn.set_err_budget(err);
  return fn;
}

SpecialFunctions::SpecialFunctions(const GridOptions& opts)
    : opts_(opts), omega_(build_omega(opts)), xi_(build_xi(opts)) {}

const SpecialFunctions& SpecialFunctions::shared() {
  static const SpecialFunctions instance;
  return instance;
}

const PiecewiseFn& SpecialFunctions::lambda_fn() const {
  std::call_once(lambda_once_, [this] { lambda_ = std::make_unique<PiecewiseFn>(build_lambda(xi_, opts_)); });
  return *lambda_;
}

double SpecialFunctions::xi_prime(double u) const {
  if (u < 1.0) return 0.0;
  return (2.0 * xi_(u - 1.0) - xi_(u)) / u;
}

double SpecialFunctions::xi_via_convolution(double u) const {
  if (u < 1.0) return 0.0;
  double result = 2.0 * omega_(u);
  if (u <= 2.0) return result;
  // omega(t) omega(u-t) is supported on [1, u-1]; kinks at integer t and u-t.
  std::vector<double> breaks{1.0, u - 1.0};
  for (double k = 2.0; k < u - 1.0; k += 1.0) {
    breaks.push_back(k);
    breaks.push_back(u - k);
  }
  std::sort(breaks.begin(), breaks.end());
  auto integrand = [this, u](double t) { return omega_(t) * omega_(u - t); };
  return result + integrate_panels(integrand, breaks, 16, 0.25);
}

double SpecialFunctions::omega_excess_integral(double u) const {
  if (u <= 1.0) return -kExpMinusGamma * std::max(u, 0.0);
  double integral;
  if (u <= omega_.grid_end()) {
    integral = omega_.integral_to(u);
  } else {
    integral = omega_.integral_to(omega_.grid_end()) + kExpMinusGamma * (u - omega_.grid_end());
  }
  return integral - kExpMinusGamma * u;
}

bool xi_prime_is_one_sided(double u) { return u == 1.0 || u == 2.0; }

double omega(double u) { return SpecialFunctions::shared().omega(u); }
double xi(double u) { return SpecialFunctions::shared().xi(u); }
double xi_prime(double u) { return SpecialFunctions::shared().xi_prime(u); }
double xi_via_convolution(double u) { return SpecialFunctions::shared().xi_via_convolution(u); }
double lambda_fn(double v) { return SpecialFunctions::shared().lambda(v); }

}  // namespace divmean
