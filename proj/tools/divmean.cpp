#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divmean/arith.hpp"
#include "divmean/constants.hpp"
#include "divmean/errors.hpp"
#include "divmean/parallel.hpp"
#include "divmean/special.hpp"
#include "divmean/theta.hpp"
#include "divmean/verify.hpp"

using namespace divmean;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedRow = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";

  bool json_constants = false;
  double V = kDefaultTruncationV;

  std::string fn_name;
  double from = 0.0;
  double to = 10.0;
  double step = 0.25;

  std::string kind;  // rough | dense | practical (enumerate, stats); verify target; figure name
  std::uint64_t x = 1000;
  double y = 2.0;
  double u = 0.0;
  std::string t = "2";
  std::string theta = "practical";
  std::vector<std::uint64_t> xs{10'000'000, 100'000'000};
  std::uint64_t N = 10'000'000;
  std::uint64_t compare_x = 0;

  bool grid_given = false;
};

void progress(const std::string& msg) { std::cerr << "[divmean] " << msg << std::endl; }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

ThetaRule theta_from(const RunConfig& cfg) {
  if (cfg.theta == "practical") return ThetaRule::practical();
  if (cfg.theta == "dense") return ThetaRule::dense(Ratio::parse(cfg.t));
  throw ConfigError("--theta must be dense or practical");
}

double rough_y(const RunConfig& cfg) {
  if (cfg.u > 0.0) return std::pow(static_cast<double>(cfg.x), 1.0 / cfg.u);
  return cfg.y;
}

std::string seq_csv(const SeqStats& st, const std::string& what) {
  return "kind,x,count,tau_sum,harmonic\n" + what + "," + std::to_string(st.x) + "," + to_string_u128(st.count) +
         "," + to_string_u128(st.tau_sum) + "," + format_real(st.harmonic) + "\n";
}

std::string seq_json(const SeqStats& st, const std::string& what) {
  return "{\"kind\":\"" + what + "\",\"x\":" + std::to_string(st.x) + ",\"count\":" + to_string_u128(st.count) +
         ",\"tau_sum\":" + to_string_u128(st.tau_sum) + ",\"harmonic\":" + format_real(st.harmonic) + "}\n";
}

int run_constants(const RunConfig& cfg, std::ostream& os) {
  progress("computing constants");
  const ConstantsReport r = cfg.V == kDefaultTruncationV ? constants_report() : compute_constants(cfg.V);
  if (cfg.json_constants || cfg.format == "json") {
    os << constants_json(r) << "\n";
  } else {
    os << constants_text(r);
  }
  return kExitOk;
}

int run_fn(const RunConfig& cfg, std::ostream& os) {
  const SpecialFunctions& f = SpecialFunctions::shared();
  const PiecewiseFn& fun =
      cfg.fn_name == "omega" ? f.omega_fn() : cfg.fn_name == "xi" ? f.xi_fn() : f.lambda_fn();
  const std::vector<double> pts = grid_points({cfg.from, cfg.to, cfg.step});
  Table table;
  table.header = {"u", "value", "err_budget"};
  table.rows = parallel_map(pts.size(), [&](std::size_t i) {
    return std::vector<double>{pts[i], fun(pts[i]), fun.err_at(pts[i])};
  });
  os << (cfg.format == "json" ? table_jsonl(table) : table_csv(table));
  return kExitOk;
}

int run_enumerate(const RunConfig& cfg, std::ostream& os) {
  progress("enumerating " + cfg.kind + " up to x=" + std::to_string(cfg.x));
  std::string buf;
  auto flush = [&] {
    os << buf;
    buf.clear();
  };
  auto emit = [&](std::uint64_t n) {
    buf += std::to_string(n);
    buf += '\n';
    if (buf.size() > (1u << 20)) flush();
  };
  if (cfg.kind == "rough") {
    const double y = rough_y(cfg);
    if (!(y >= 2.0)) throw RangeError("y must be >= 2");
    emit(1);
    if (cfg.x >= 2) {
      const SpfTable table = build_spf_table(cfg.x);
      for (std::uint64_t n = 2; n <= cfg.x; ++n) {
        if (static_cast<double>(table.spf_unchecked(n)) > y) emit(n);
      }
    }
  } else {
    RunConfig c = cfg;
    c.theta = cfg.kind;
    const ThetaRule theta = theta_from(c);
    for (std::uint64_t n : collect_B(theta, cfg.x, chain_primes(theta, cfg.x))) emit(n);
  }
  flush();
  return kExitOk;
}

int run_stats(const RunConfig& cfg, std::ostream& os) {
  progress("stats " + cfg.kind + " up to x=" + std::to_string(cfg.x));
  SeqStats st;
  std::string what = cfg.kind;
  if (cfg.kind == "rough") {
    const double y = rough_y(cfg);
    const SpfTable table = build_spf_table(std::max<std::uint64_t>(cfg.x, 2));
    st = rough_stats(cfg.x, y, table);
    what = "rough(y=" + format_real(y) + ")";
  } else if (cfg.kind == "dense") {
    const Ratio t = Ratio::parse(cfg.t);
    st = dense_stats(cfg.x, t);
    what = ThetaRule::dense(t).tag();
  } else {
    st = practical_stats(cfg.x);
  }
  os << (cfg.format == "json" ? seq_json(st, what) : seq_csv(st, what));
  return kExitOk;
}

std::vector<std::uint64_t> decade_cutoffs(std::uint64_t N) {
  std::vector<std::uint64_t> cut;
  for (std::uint64_t c = 1000; c < N; c *= 10) cut.push_back(c);
  cut.push_back(N);
  return cut;
}

std::vector<CompareRow> verify_rows(const RunConfig& cfg) {
  if (cfg.kind == "rough") {
    const double y = rough_y(cfg);
    if (!(y >= 2.0)) throw RangeError("y must be >= 2");
    progress("sieving to " + std::to_string(cfg.x));
    const SpfTable table = build_spf_table(std::max<std::uint64_t>(cfg.x, 2));
    const MertensTable mertens(build_prime_list(static_cast<std::uint64_t>(y) + 1));
    return compare_rough(cfg.x, y, table, mertens);
  }
  if (cfg.kind == "dense") {
    progress("enumerating t-dense integers to " + std::to_string(cfg.x));
    return compare_dense(cfg.x, Ratio::parse(cfg.t));
  }
  if (cfg.kind == "practical") {
    std::vector<std::uint64_t> xs = cfg.xs;
    std::sort(xs.begin(), xs.end());
    progress("enumerating practical numbers to " + std::to_string(xs.back()));
    const std::vector<NuPoint> pts = fit_nu_practical(xs);
    std::vector<CompareRow> rows;
    const double delta = constants_report().delta();
    for (const NuPoint& p : pts) {
      const auto xd = static_cast<double>(p.x);
      // band [0.45, 0.65], claimed from 10^8 on
      rows.push_back(make_row_threshold("T/(x(log x)^delta)", "x=" + std::to_string(p.x), p.ratio, 0.55,
                                        std::pow(std::log(xd), -delta), 0.10, p.x >= 100'000'000));
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      rows.push_back(make_row_threshold(
          "ratio_variation", "x=" + std::to_string(pts[i - 1].x) + ";x=" + std::to_string(pts[i].x), pts[i].ratio,
          pts[i - 1].ratio, NAN, 0.10 * pts[i - 1].ratio, pts[i].x >= 100'000'000 && pts[i - 1].x >= 10'000'000));
    }
    return rows;
  }
  const ThetaRule theta = theta_from(cfg);
  if (cfg.kind == "L") {
    const std::vector<std::uint64_t> cut = decade_cutoffs(cfg.N);
    progress("L partial sums for " + theta.tag() + " to N=" + std::to_string(cfg.N));
    const std::vector<double> L = L_partial(theta, cut);
    std::vector<CompareRow> rows;
    for (std::size_t i = 0; i < L.size(); ++i) {
      CompareRow row = make_row("L_partial", theta.tag() + ";N=" + std::to_string(cut[i]), L[i], 1.0, NAN, true);
      row.threshold = NAN;
      row.pass = L[i] <= 1.0 && (i == 0 || L[i] >= L[i - 1]);
      rows.push_back(row);
    }
    rows.push_back(make_row_threshold("L_partial_near_1", theta.tag() + ";N=" + std::to_string(cfg.N), L.back(),
                                      1.0, NAN, 0.15, cfg.N >= 10'000'000));
    return rows;
  }
  if (cfg.kind == "ctheta") {
    const std::uint64_t M = cfg.compare_x ? cfg.compare_x : cfg.N * 10;
    progress("c_theta partial sum for " + theta.tag() + " to N=" + std::to_string(cfg.N) + ", B(x) to " +
             std::to_string(M));
    const double c = c_theta_partial(theta, cfg.N);
    const SeqStats st = chain_stats(theta, M, chain_primes(theta, M));
    const auto Md = static_cast<double>(M);
    const double scaled = static_cast<double>(st.count) * std::log(Md) / Md;
    const double E = E_of_x(FSpec{FSpec::Kind::power_of_log, 1.0}, Md);
    return {make_row_threshold("c_theta_partial~B(x)log(x)/x",
                               theta.tag() + ";N=" + std::to_string(cfg.N) + ";x=" + std::to_string(M), scaled, c,
                               E, 0.1 / std::max(std::abs(scaled), 1.0), true)};
  }
  if (cfg.kind == "funceq") {
    progress("functional equation check for " + theta.tag() + " at x=" + std::to_string(cfg.x));
    const SpfTable table = build_spf_table(std::max<std::uint64_t>(cfg.x, 2));
    const FunceqSides s = funceq_sides(theta, cfg.x, table);
    const std::string params = theta.tag() + ";x=" + std::to_string(cfg.x);
    CompareRow count = make_row("funceq_f=1", params, static_cast<double>(s.lhs_count),
                                static_cast<double>(s.rhs_count), 0.0, true);
    count.pass = s.lhs_count == s.rhs_count;
    CompareRow tau = make_row("funceq_f=tau", params, static_cast<double>(s.lhs_tau), static_cast<double>(s.rhs_tau),
                              0.0, true);
    tau.pass = s.lhs_tau == s.rhs_tau;
    return {count, tau};
  }
  throw ConfigError("unknown verify target '" + cfg.kind + "'");
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
  const std::vector<CompareRow> rows = verify_rows(cfg);
  os << (cfg.format == "json" ? rows_jsonl(rows) : rows_csv(rows));
  return all_pass(rows) ? kExitOk : kExitFailedRow;
}

int run_figures(const RunConfig& cfg, std::ostream& os) {
  std::optional<FigureGrid> grid;
  if (cfg.grid_given) grid = FigureGrid{cfg.from, cfg.to, cfg.step};
  const Table table = emit_figure_data(cfg.kind, grid);
  os << (cfg.format == "json" ? table_jsonl(table) : table_csv(table));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.threads = thread_count();

  CLI::App app{"divmean: mean divisor counts over rough, dense and practical numbers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "worker threads (default: $DIVMEAN_THREADS, else 1)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "write output to this file instead of stdout");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* constants = app.add_subcommand("constants", "delta, lambda_0, lambda_1, zero census and certificates");
  constants->add_flag("--json", cfg.json_constants, "JSON certificate document");
  constants->add_option("--V", cfg.V, "truncation of g for delta and the complex pair")
      ->capture_default_str()
      ->check(CLI::Range(3.0, 30.0));

  auto* fn = app.add_subcommand("fn", "tabulate omega, xi or lambda on a grid");
  fn->add_option("name", cfg.fn_name, "omega | xi | lambda")->required()->check(
      CLI::IsMember({"omega", "xi", "lambda"}));
  fn->add_option("--from", cfg.from, "first grid point")->capture_default_str();
  fn->add_option("--to", cfg.to, "last grid point")->capture_default_str();
  fn->add_option("--step", cfg.step, "grid step")->capture_default_str()->check(CLI::PositiveNumber);

  auto* enumerate = app.add_subcommand("enumerate", "list the members up to x, one per line, ascending");
  enumerate->add_option("kind", cfg.kind, "rough | dense | practical")->required()->check(
      CLI::IsMember({"rough", "dense", "practical"}));
  enumerate->add_option("--x", cfg.x, "cutoff")->capture_default_str()->check(CLI::Range(std::uint64_t{1},
                                                                                          std::uint64_t{10'000'000'000}));
  enumerate->add_option("--y", cfg.y, "roughness bound (rough)")->capture_default_str();
  enumerate->add_option("--u", cfg.u, "set y = x^(1/u) (rough)");
  enumerate->add_option("--t", cfg.t, "density parameter t >= 2 (dense), decimal")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "count, tau-sum and sum of 1/n up to x");
  stats->add_option("kind", cfg.kind, "rough | dense | practical")->required()->check(
      CLI::IsMember({"rough", "dense", "practical"}));
  stats->add_option("--x", cfg.x, "cutoff")->capture_default_str()->check(CLI::Range(std::uint64_t{1},
                                                                                      std::uint64_t{10'000'000'000}));
  stats->add_option("--y", cfg.y, "roughness bound (rough)")->capture_default_str();
  stats->add_option("--u", cfg.u, "set y = x^(1/u) (rough)");
  stats->add_option("--t", cfg.t, "density parameter t >= 2 (dense), decimal")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "exact values against the asymptotic estimates");
  verify->add_option("target", cfg.kind, "rough | dense | practical | L | ctheta | funceq")->required()->check(
      CLI::IsMember({"rough", "dense", "practical", "L", "ctheta", "funceq"}));
  verify->add_option("--x", cfg.x, "cutoff (rough, dense, funceq)")->capture_default_str()->check(
      CLI::Range(std::uint64_t{1}, std::uint64_t{10'000'000'000}));
  verify->add_option("--y", cfg.y, "roughness bound (rough)")->capture_default_str();
  verify->add_option("--u", cfg.u, "set y = x^(1/u) (rough)");
  verify->add_option("--t", cfg.t, "density parameter t >= 2 (dense, or --theta dense)")->capture_default_str();
  verify->add_option("--theta", cfg.theta, "theta rule for L, ctheta, funceq")
      ->check(CLI::IsMember({"dense", "practical"}))
      ->capture_default_str();
  verify->add_option("--xs", cfg.xs, "cutoffs for the practical ratio")->delimiter(',')->capture_default_str();
  verify->add_option("--N", cfg.N, "series cutoff (L, ctheta)")->capture_default_str()->check(
      CLI::Range(std::uint64_t{1}, std::uint64_t{1'000'000'000}));
  verify->add_option("--compare-x", cfg.compare_x, "B(x) cutoff for ctheta (default 10 N)");

  auto* figures = app.add_subcommand("figures", "figure data as CSV");
  figures->add_option("which", cfg.kind, "fig1 | fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  auto* ffrom = figures->add_option("--from", cfg.from, "first grid point (fig1 0, fig2 0)");
  auto* fto = figures->add_option("--to", cfg.to, "last grid point (fig1 10, fig2 50)");
  auto* fstep = figures->add_option("--step", cfg.step, "grid step (fig1 0.05, fig2 0.25)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (figures->parsed()) {
    cfg.grid_given = ffrom->count() + fto->count() + fstep->count() > 0;
    if (cfg.grid_given) {
      const FigureGrid def = cfg.kind == "fig1" ? kFig1Grid : kFig2Grid;
      if (ffrom->count() == 0) cfg.from = def.from;
      if (fto->count() == 0) cfg.to = def.to;
      if (fstep->count() == 0) cfg.step = def.step;
    }
  }

  try {
    set_thread_count(cfg.threads);
    Output out(cfg.out);
    std::ostream& os = out.stream();
    int code = kExitOk;
    if (constants->parsed()) code = run_constants(cfg, os);
    if (fn->parsed()) code = run_fn(cfg, os);
    if (enumerate->parsed()) code = run_enumerate(cfg, os);
    if (stats->parsed()) code = run_stats(cfg, os);
    if (verify->parsed()) code = run_verify(cfg, os);
    if (figures->parsed()) code = run_figures(cfg, os);
    os.flush();
    return code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailedRow;
  }
}
