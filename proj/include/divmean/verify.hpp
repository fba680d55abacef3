#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divmean/arith.hpp"
#include "divmean/numeric.hpp"
#include "divmean/theta.hpp"

namespace divmean {

inline constexpr double kDefaultSlack = 5.0;

// One estimate-vs-exact line. envelope is the predicted relative error scale
// (nan when none applies); threshold is what rel_err is compared against.
struct CompareRow {
  std::string quantity;
  std::string params;
  double exact = 0.0;
  double estimate = 0.0;
  double rel_err = 0.0;     // |exact - estimate| / max(|exact|, 1)
  double envelope = 0.0;
  double slack = kDefaultSlack;
  double threshold = 0.0;
  bool acceptance = false;  // counts toward the exit status
  bool pass = true;
};

double relative_error(double exact, double estimate);

// Fills rel_err, threshold = slack * envelope and pass.
CompareRow make_row(std::string quantity, std::string params, double exact, double estimate, double envelope,
                    bool acceptance, double slack = kDefaultSlack);
// Same with an explicit threshold on rel_err.
CompareRow make_row_threshold(std::string quantity, std::string params, double exact, double estimate,
                              double envelope, double threshold, bool acceptance);

// Main terms of the asymptotic formulas for y-rough n <= x:
//   Phi: 1 + x P + x/log y (omega(u) - e^{-gamma} - y/x [x >= y])
//   S:   1 + x log x P^2 + x/log y (xi(u) - u e^{-2gamma} - 2y/x [x >= y])
//   sum 1/n: 1 + log x P + int_0^u (omega - e^{-gamma})
// with P = prod_{p<=y} (1 - 1/p) and u = log x / log y.
double estimate_phi(double x, double y, const MertensTable& mertens);
double estimate_S(double x, double y, const MertensTable& mertens);
double estimate_harmonic(double x, double y, const MertensTable& mertens);

// Rows Phi, S, sum 1/n and S/Phi. The ratio is compared with xi(u)/omega(u)
// when x >= 2y and with log(x y^2) P otherwise.
std::vector<CompareRow> compare_rough(std::uint64_t x, double y, const SpfTable& table, const MertensTable& mertens);

// Rows T(x,t) vs x log t lambda(v) and T / (x v^delta log t) (informational).
std::vector<CompareRow> compare_dense(std::uint64_t x, Ratio t);

struct NuPoint {
  std::uint64_t x;
  u128 count;
  u128 tau_sum;
  double ratio;  // T(x) / (x (log x)^delta)
};
std::vector<NuPoint> fit_nu_practical(const std::vector<std::uint64_t>& xs);

// Partial sums of sum_{n in B} tau(n)/n prod_{p<=theta(n)} (1-1/p)^2 at each cutoff (ascending).
std::vector<double> L_partial(const ThetaRule& theta, const std::vector<std::uint64_t>& cutoffs);
double L_partial(const ThetaRule& theta, std::uint64_t N);

// Partial sums of 1/(1-e^{-gamma}) sum_{n in B} 1/n (sum_{p<=theta(n)} log p/(p-1) - log n) prod_{p<=theta(n)} (1-1/p).
std::vector<double> c_theta_partial(const ThetaRule& theta, const std::vector<std::uint64_t>& cutoffs);
double c_theta_partial(const ThetaRule& theta, std::uint64_t N);

// Shape of f in theta(n) <= n f(n).
struct FSpec {
  enum class Kind { power_of_log, constant };
  Kind kind = Kind::power_of_log;
  double param = 1.0;  // A for (log y)^A, c for the constant

  // "log^A" / "const:c"; throws ConfigError otherwise.
  static FSpec parse(const std::string& text);
};

// int_x^inf log f(y) / (y log^2 y) dy in closed form. ConfigError when f is
// not non-decreasing or f < 1.
double E_of_x(const FSpec& f, double x);

struct FigureGrid {
  double from;
  double to;
  double step;
};

inline constexpr FigureGrid kFig1Grid{0.0, 10.0, 0.05};
inline constexpr FigureGrid kFig2Grid{0.0, 50.0, 0.25};

// Grid points from + i step for i = 0 .. floor((to - from)/step + 1e-9).
std::vector<double> grid_points(const FigureGrid& grid);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// fig1: u, xi, (u+2)e^{-2gamma}, xi/omega (nan where omega = 0), (u+2)e^{-gamma}
// fig2: v, lambda, lambda_0 (v+1)^delta + lambda_1 / (v+1)
Table emit_figure_data(const std::string& which, const std::optional<FigureGrid>& grid = std::nullopt);

std::string table_csv(const Table& table);
std::string table_jsonl(const Table& table);

std::string rows_csv(const std::vector<CompareRow>& rows);
std::string rows_jsonl(const std::vector<CompareRow>& rows);

bool all_pass(const std::vector<CompareRow>& rows);

}  // namespace divmean
