#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace divmean {

// Closed-form evaluator on [lo, hi).
struct ExactPiece {
  double lo;
  double hi;
  double (*eval)(double);
};

// Uniform grid aligned to the integers: node i sits at start + i/per_unit and
// interpolation never mixes nodes from different unit panels.
struct UniformGrid {
  double start = 0.0;
  int per_unit = 1024;
  std::vector<double> values;

  double step() const { return 1.0 / per_unit; }
  double end() const { return start + static_cast<double>(values.size() - 1) / per_unit; }
  double node(std::size_t i) const { return start + static_cast<double>(i) / per_unit; }
};

// Cubic Lagrange interpolation inside the unit panel containing u.
double interpolate_panel(std::span<const double> values, double start, int per_unit, double u);

// A special function: exact pieces near the start of its support, a dense
// grid beyond them, optionally an asymptotic continuation past the grid.
class PiecewiseFn {
 public:
  PiecewiseFn() = default;
  PiecewiseFn(std::string name, double support_start, std::vector<ExactPiece> pieces, UniformGrid grid,
              double (*beyond)(double));

  // 0 below the support; RangeError past the grid when there is no continuation.
  double operator()(double u) const;

  const std::string& name() const { return name_; }
  double support_start() const { return support_start_; }
  const std::vector<ExactPiece>& pieces() const { return pieces_; }
  const UniformGrid& grid() const { return grid_; }
  double grid_end() const { return grid_.end(); }

  // Uniform absolute error claimed for the grid region (discretization plus
  // interpolation), estimated by halving the step.
  double err_budget() const { return err_budget_; }
  void set_err_budget(double e) { err_budget_ = e; }
  // Error claimed at u: 0 below the support and on the exact pieces.
  double err_at(double u) const;

  // Integral of the function from the support start to u (u <= grid end).
  double integral_to(double u) const;

 private:
  std::string name_;
  double support_start_ = 0.0;
  std::vector<ExactPiece> pieces_;
  UniformGrid grid_;
  double (*beyond_)(double) = nullptr;
  double err_budget_ = 0.0;
  std::vector<double> cumulative_;  // integral from grid start to each node
};

struct GridOptions {
  int per_unit = 1024;          // step 2^-10
  double omega_upper = 64.0;
  double xi_upper = 64.0;
  double lambda_upper = 51.0;
  bool estimate_error = true;   // rebuild at double step for err_budget
};

PiecewiseFn build_omega(const GridOptions& opts = {});
PiecewiseFn build_xi(const GridOptions& opts = {});
PiecewiseFn build_lambda(const PiecewiseFn& xi, const GridOptions& opts = {});

// omega, xi, xi' and lambda built once and shared. lambda is built on first use.
class SpecialFunctions {
 public:
  explicit SpecialFunctions(const GridOptions& opts = {});

  static const SpecialFunctions& shared();

  double omega(double u) const { return omega_(u); }
  double xi(double u) const { return xi_(u); }
  // (2 xi(u-1) - xi(u)) / u; at u = 1 and u = 2 this is the right-hand limit.
  double xi_prime(double u) const;
  double lambda(double v) const { return lambda_fn()(v); }

  // 2 omega(u) + int_0^u omega(t) omega(u-t) dt, by quadrature.
  double xi_via_convolution(double u) const;
  // int_0^u (omega(v) - e^{-gamma}) dv.
  double omega_excess_integral(double u) const;

  const PiecewiseFn& omega_fn() const { return omega_; }
  const PiecewiseFn& xi_fn() const { return xi_; }
  const PiecewiseFn& lambda_fn() const;
  const GridOptions& options() const { return opts_; }

 private:
  GridOptions opts_;
  PiecewiseFn omega_;
  PiecewiseFn xi_;
  mutable std::once_flag lambda_once_;
  mutable std::unique_ptr<PiecewiseFn> lambda_;
};

bool xi_prime_is_one_sided(double u);

double omega(double u);
double xi(double u);
double xi_prime(double u);
double xi_via_convolution(double u);
double lambda_fn(double v);

}  // namespace divmean
