#include "divmean/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "divmean/constants.hpp"
#include "divmean/errors.hpp"
#include "divmean/parallel.hpp"
#include "divmean/special.hpp"
#include "json.hpp"

namespace divmean {

namespace {

const SpecialFunctions& fns() { return SpecialFunctions::shared(); }

std::string param_text(const std::string& a, double va, const std::string& b, double vb) {
  return a + "=" + format_real(va) + ";" + b + "=" + format_real(vb);
}

double as_double(u128 v) { return static_cast<double>(v); }

double json_number(double v) { return std::strtod(format_real(v).c_str(), nullptr); }

// Partial sums of term(node) over B in increasing n, read off at each cutoff.
template <class Term>
std::vector<double> series_partial(const ThetaRule& theta, std::vector<std::uint64_t> cutoffs, Term term) {
  if (cutoffs.empty()) return {};
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) throw ConfigError("cutoffs must be ascending");
  const std::uint64_t N = cutoffs.back();
  if (N < 1) throw RangeError("cutoff must be >= 1");
  std::vector<ChainNode> nodes;
  generate_B(theta, N, chain_primes(theta, N), [&nodes](const ChainNode& c) { nodes.push_back(c); });
  std::sort(nodes.begin(), nodes.end(), [](const ChainNode& a, const ChainNode& b) { return a.n < b.n; });

  std::uint64_t top = 2;
  for (const ChainNode& c : nodes) top = std::max(top, theta.floor_value(c.n, c.sigma));
  if (top >= (std::uint64_t{1} << 32)) throw RangeError("theta(n) too large for the prime tables");
  const MertensTable mertens(build_prime_list(top));

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (nodes.size() + kChunk - 1) / kChunk;
  auto terms = parallel_map(chunks, [&](std::size_t c) {
    std::vector<double> out;
    const std::size_t hi = std::min(nodes.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < hi; ++i) {
      const ChainNode& node = nodes[i];
      out.push_back(term(node, static_cast<double>(theta.floor_value(node.n, node.sigma)), mertens));
    }
    return out;
  });

  std::vector<double> sums;
  CompensatedSum<double> acc;
  std::size_t k = 0;
  std::size_t i = 0;
  for (const auto& chunk : terms) {
    for (double v : chunk) {
      while (k < cutoffs.size() && nodes[i].n > cutoffs[k]) {
        sums.push_back(acc.value());
        ++k;
      }
      acc.add(v);
      ++i;
    }
  }
  while (k < cutoffs.size()) {
    sums.push_back(acc.value());
    ++k;
  }
  return sums;
}

}  // namespace

double relative_error(double exact, double estimate) {
  return std::abs(exact - estimate) / std::max(std::abs(exact), 1.0);
}

CompareRow make_row(std::string quantity, std::string params, double exact, double estimate, double envelope,
                    bool acceptance, double slack) {
  CompareRow row;
  row.quantity = std::move(quantity);
  row.params = std::move(params);
  row.exact = exact;
  row.estimate = estimate;
  row.rel_err = relative_error(exact, estimate);
  row.envelope = envelope;
  row.slack = slack;
  row.threshold = slack * envelope;
  row.acceptance = acceptance;
  row.pass = !(row.rel_err > row.threshold);
  return row;
}

CompareRow make_row_threshold(std::string quantity, std::string params, double exact, double estimate,
                              double envelope, double threshold, bool acceptance) {
  CompareRow row = make_row(std::move(quantity), std::move(params), exact, estimate, envelope, acceptance);
  row.slack = std::isfinite(envelope) && envelope > 0 ? threshold / envelope : NAN;
  row.threshold = threshold;
  row.pass = !(row.rel_err > row.threshold);
  return row;
}

double estimate_phi(double x, double y, const MertensTable& mertens) {
  const double u = std::log(x) / std::log(y);
  const double P = mertens.product(y);
  const double edge = x >= y ? y / x : 0.0;
  return 1.0 + x * P + x / std::log(y) * (fns().omega(u) - kExpMinusGamma - edge);
}

double estimate_S(double x, double y, const MertensTable& mertens) {
  const double u = std::log(x) / std::log(y);
  const double P = mertens.product(y);
  const double edge = x >= y ? 2.0 * y / x : 0.0;
  return 1.0 + x * std::log(x) * P * P + x / std::log(y) * (fns().xi(u) - u * kExpMinus2Gamma - edge);
}

double estimate_harmonic(double x, double y, const MertensTable& mertens) {
  const double u = std::log(x) / std::log(y);
  return 1.0 + std::log(x) * mertens.product(y) + fns().omega_excess_integral(u);
}

std::vector<CompareRow> compare_rough(std::uint64_t x, double y, const SpfTable& table, const MertensTable& mertens) {
  const SeqStats st = rough_stats(x, y, table);
  const auto xd = static_cast<double>(x);
  const double u = std::log(xd) / std::log(y);
  const std::string params = param_text("x", xd, "y", y) + ";u=" + format_real(u);
  const double inv_log_y = 1.0 / std::log(y);
  const double phi = as_double(st.count);
  const double S = as_double(st.tau_sum);

  std::vector<CompareRow> rows;
  const double phi_est = estimate_phi(xd, y, mertens);
  const double S_est = estimate_S(xd, y, mertens);
  rows.push_back(make_row("Phi", params, phi, phi_est, inv_log_y, true));
  rows.push_back(make_row("S", params, S, S_est, inv_log_y, true));
  rows.push_back(make_row("harmonic", params, st.harmonic, estimate_harmonic(xd, y, mertens), inv_log_y, true));

  const double ratio = S / phi;
  if (xd >= 2.0 * y) {
    const double est = fns().xi(u) / fns().omega(u);
    const double env = 1.0 / std::log(xd) + std::exp(-std::sqrt(std::log(y)));
    rows.push_back(make_row("S/Phi~xi/omega", params, ratio, est, env, true));
  } else if (xd >= y) {
    const double P = mertens.product(y);
    const double est = std::log(xd * y * y) * P;
    const double env = 1.0 / std::log(xd) + std::pow(u, -u);
    rows.push_back(make_row("S/Phi~log(xy^2)P", params, ratio, est, env, true));
  } else {
    rows.push_back(make_row("S/Phi", params, ratio, S_est / phi_est, inv_log_y, true));
  }
  return rows;
}

std::vector<CompareRow> compare_dense(std::uint64_t x, Ratio t) {
  const SeqStats st = dense_stats(x, t);
  const auto xd = static_cast<double>(x);
  const double log_t = std::log(t.value());
  const double v = std::log(xd) / log_t;
  const std::string params = param_text("x", xd, "t", t.value()) + ";v=" + format_real(v);
  const double T = as_double(st.tau_sum);
  const double lam = fns().lambda(v);

  std::vector<CompareRow> rows;
  const double env = 1.0 / log_t + 1.0 / (log_t * std::max(lam, 1.0));
  rows.push_back(make_row("T", params, T, xd * log_t * lam, env, true));
  rows.push_back(make_row("T/(x log t lambda)", params, T / (xd * log_t * lam), 1.0, env, false));
  const double delta = constants_report().delta();
  const double vd = std::pow(std::max(v, 1.0), delta);
  rows.push_back(make_row("T/(x v^delta log t)", params, T / (xd * vd * log_t), lam / vd, NAN, false));
  rows.push_back(make_row("D", params, as_double(st.count), NAN, NAN, false));
  return rows;
}

std::vector<NuPoint> fit_nu_practical(const std::vector<std::uint64_t>& xs) {
  const double delta = constants_report().delta();
  std::vector<NuPoint> out;
  for (std::uint64_t x : xs) {
    if (x < 2) throw RangeError("fit_nu_practical needs x >= 2");
    const SeqStats st = practical_stats(x);
    const auto xd = static_cast<double>(x);
    out.push_back({x, st.count, st.tau_sum, as_double(st.tau_sum) / (xd * std::pow(std::log(xd), delta))});
  }
  return out;
}

std::vector<double> L_partial(const ThetaRule& theta, const std::vector<std::uint64_t>& cutoffs) {
  return series_partial(theta, cutoffs, [](const ChainNode& node, double th, const MertensTable& m) {
    return static_cast<double>(node.tau) / static_cast<double>(node.n) * std::exp(2.0 * m.log_product(th));
  });
}

double L_partial(const ThetaRule& theta, std::uint64_t N) { return L_partial(theta, std::vector{N}).front(); }

std::vector<double> c_theta_partial(const ThetaRule& theta, const std::vector<std::uint64_t>& cutoffs) {
  std::vector<double> sums =
      series_partial(theta, cutoffs, [](const ChainNode& node, double th, const MertensTable& m) {
        const auto n = static_cast<double>(node.n);
        return (m.log_weight_sum(th) - std::log(n)) * std::exp(m.log_product(th)) / n;
      });
  for (double& s : sums) s /= 1.0 - kExpMinusGamma;
  return sums;
}

double c_theta_partial(const ThetaRule& theta, std::uint64_t N) {
  return c_theta_partial(theta, std::vector{N}).front();
}

FSpec FSpec::parse(const std::string& text) {
  auto number = [&text](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
      throw ConfigError("bad f-spec '" + text + "'");
    }
    return v;
  };
  FSpec f;
  if (text.rfind("log^", 0) == 0) {
    f.kind = Kind::power_of_log;
    f.param = number(text.substr(4));
  } else if (text.rfind("const:", 0) == 0) {
    f.kind = Kind::constant;
    f.param = number(text.substr(6));
  } else {
    throw ConfigError("f-spec must be log^A or const:c, got '" + text + "'");
  }
  return f;
}

double E_of_x(const FSpec& f, double x) {
  if (!(x > 1.0)) throw DomainError("E(x) needs x > 1");
  const double L = std::log(x);
  switch (f.kind) {
    case FSpec::Kind::power_of_log:
      if (!(f.param >= 0.0)) throw ConfigError("(log y)^A needs A >= 0 to be non-decreasing");
      if (!(x >= std::exp(1.0))) throw DomainError("E(x) for (log y)^A needs x >= e");
      return f.param * (std::log(L) + 1.0) / L;
    case FSpec::Kind::constant:
      if (!(f.param >= 1.0)) throw ConfigError("constant f needs c >= 1");
      return std::log(f.param) / L;
  }
  return NAN;
}

std::vector<double> grid_points(const FigureGrid& grid) {
  if (!(grid.step > 0.0) || !(grid.to >= grid.from)) throw ConfigError("grid needs step > 0 and to >= from");
  const auto count = static_cast<std::size_t>(std::floor((grid.to - grid.from) / grid.step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = grid.from + static_cast<double>(i) * grid.step;
  return out;
}

Table emit_figure_data(const std::string& which, const std::optional<FigureGrid>& grid) {
  Table table;
  if (which == "fig1") {
    table.header = {"u", "xi", "xi_asymptote", "xi_over_omega", "ratio_asymptote"};
    const auto pts = grid_points(grid.value_or(kFig1Grid));
    table.rows = parallel_map(pts.size(), [&](std::size_t i) {
      const double u = pts[i];
      const double w = fns().omega(u);
      const double x = fns().xi(u);
      return std::vector<double>{u, x, (u + 2.0) * kExpMinus2Gamma, w > 0.0 ? x / w : NAN,
                                 (u + 2.0) * kExpMinusGamma};
    });
  } else if (which == "fig2") {
    table.header = {"v", "lambda", "approximation"};
    const ConstantsReport& c = constants_report();
    const auto pts = grid_points(grid.value_or(kFig2Grid));
    const PiecewiseFn& lam = fns().lambda_fn();
    table.rows = parallel_map(pts.size(), [&](std::size_t i) {
      const double v = pts[i];
      return std::vector<double>{v, lam(v), c.lambda0() * std::pow(v + 1.0, c.delta()) + c.lambda1() / (v + 1.0)};
    });
  } else {
    throw ConfigError("unknown figure '" + which + "' (fig1 or fig2)");
  }
  return table;
}

std::string table_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_real(row[i]);
    out += "\n";
  }
  return out;
}

std::string table_jsonl(const Table& table) {
  std::string out;
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
      j[table.header[i]] = std::isfinite(row[i]) ? nlohmann::ordered_json(json_number(row[i])) : nullptr;
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::string rows_csv(const std::vector<CompareRow>& rows) {
  std::string out = "quantity,params,exact,estimate,rel_err,envelope,slack,threshold,acceptance,pass\n";
  for (const CompareRow& r : rows) {
    out += r.quantity + "," + r.params + "," + format_real(r.exact) + "," + format_real(r.estimate) + "," +
           format_real(r.rel_err) + "," + format_real(r.envelope) + "," + format_real(r.slack) + "," +
           format_real(r.threshold) + "," + (r.acceptance ? "true" : "false") + "," + (r.pass ? "PASS" : "FAIL") +
           "\n";
  }
  return out;
}

std::string rows_jsonl(const std::vector<CompareRow>& rows) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(json_number(v)) : nullptr; };
  std::string out;
  for (const CompareRow& r : rows) {
    nlohmann::ordered_json j;
    j["quantity"] = r.quantity;
    j["params"] = r.params;
    j["exact"] = num(r.exact);
    j["estimate"] = num(r.estimate);
    j["rel_err"] = num(r.rel_err);
    j["envelope"] = num(r.envelope);
    j["slack"] = num(r.slack);
    j["threshold"] = num(r.threshold);
    j["acceptance"] = r.acceptance;
    j["pass"] = r.pass;
    out += j.dump() + "\n";
  }
  return out;
}

bool all_pass(const std::vector<CompareRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CompareRow& r) { return !r.acceptance || r.pass; });
}

}  // namespace divmean
