// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance --cli <path to divmean> --golden <dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "divmean/arith.hpp"
#include "divmean/constants.hpp"
#include "divmean/numeric.hpp"
#include "divmean/special.hpp"
#include "divmean/theta.hpp"
#include "divmean/verify.hpp"

using namespace divmean;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [fail: " + what + "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void report(int id, Outcome& o) {
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail.str() << o.failures << std::endl;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ConstantsReport& r = constants_report();
  const double dg = r.delta_g.location.real();
  const double dq = r.delta_Q.location.real();
  const double l1_exact = 2.0 / (3.0 * kExpMinus2Gamma - 2.0);
  const double secs = seconds_since(t0);
  o.check(std::abs(dg - dq) <= 1e-6, "delta routes differ");
  o.check(dg > 0.713611 && dg < 0.713614, "delta(g) outside bracket");
  o.check(dq > 0.713611 && dq < 0.713614, "delta(Q) outside bracket");
  o.check(std::round(r.lambda0() * 1e6) == 1118192.0, "lambda0 residue digits");
  o.check(std::round(r.lambda0_I * 1e6) == 1118192.0, "lambda0 integral digits");
  o.check(std::abs(r.lambda1() - l1_exact) <= 1e-6, "lambda1 residue");
  o.check(secs < 60.0, "runtime");
  o.detail << "delta_g=" << fmt(dg) << " delta_Q=" << fmt(dq) << " lambda0=" << fmt(r.lambda0())
           << " lambda0_I=" << fmt(r.lambda0_I) << " lambda1=" << fmt(r.lambda1()) << " exact=" << fmt(l1_exact)
           << " time=" << fmt(secs, 3) << "s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const ConstantsReport& r = constants_report();
  const cplx res = r.complex_pair.residue;
  o.check(r.zeros_in_R == 2, "zeros in rectangle");
  o.check(r.zeros_in_square == 1, "zeros in pair square");
  o.check(std::trunc(res.real() * 1e4) == -78.0, "pair residue real digits");
  o.check(std::trunc(std::abs(res.imag()) * 1e4) == 31.0, "pair residue imaginary digits");
  o.check(r.tail_bound_V5 < 0.0035, "tail bound");
  o.check(r.boundary_min_V5 > 0.0051, "boundary minimum");
  o.detail << "zeros_R=" << r.zeros_in_R << " zeros_square=" << r.zeros_in_square << " residue=" << fmt(res.real(), 6)
           << (res.imag() < 0 ? "" : "+") << fmt(res.imag(), 6) << "i tail_V5=" << fmt(r.tail_bound_V5, 6)
           << " min|g5|=" << fmt(r.boundary_min_V5, 6);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const SpecialFunctions& F = SpecialFunctions::shared();
  double conv = 0.0;
  for (double u = 0.0; u <= 10.0; u += 1.0 / 64) conv = std::max(conv, std::abs(F.xi(u) - F.xi_via_convolution(u)));
  o.check(conv <= 1e-6, "convolution identity");

  const PiecewiseFn& fn = F.xi_fn();
  const UniformGrid& g = fn.grid();
  bool bounds = true;
  std::size_t strict = 0, resolved = 0;
  double strict_to = 0.0;
  bool envelope = true;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double u = g.node(i);
    if (u < 1.0) continue;
    bounds = bounds && g.values[i] >= (u + 2.0) / 4.0 && g.values[i] <= u + 1.0;
    if (u < 1.5) continue;
    const double env = xi_envelope(u);
    const double dev = std::abs(g.values[i] - (u + 2.0) * kExpMinus2Gamma);
    if (dev <= env) {
      ++strict;
      strict_to = u;
    } else if (env <= fn.err_budget() && dev <= env + fn.err_budget()) {
      ++resolved;
    } else {
      envelope = false;
    }
  }
  o.check(bounds, "xi bounds");
  o.check(envelope, "asymptote envelope");

  const double excess = F.omega_excess_integral(30.0) - (kExpMinusGamma - 1.0);
  o.check(std::abs(excess) <= 1e-6, "omega excess integral");

  bool identity = true;
  for (double v = 0.0; v <= 1.0; v += 1.0 / 1024) identity = identity && F.lambda(v) == v;
  o.check(identity && F.lambda(1.0) == 1.0, "lambda(v) = v on [0,1]");

  const ConstantsReport& r = constants_report();
  double worst = 0.0;
  for (double v = 20.0; v <= 50.0; v += 0.25) {
    const double approx = r.lambda0() * std::pow(v + 1.0, r.delta()) + r.lambda1() / (v + 1.0);
    worst = std::max(worst, std::abs(F.lambda(v) - approx) / (10.0 * std::pow(v + 1.0, -1.962)));
  }
  o.check(worst <= 1.0, "lambda approximation");
  o.detail << "conv_max=" << fmt(conv, 3) << " envelope_strict=" << strict << " (last at u=" << fmt(strict_to, 6)
           << ") within_err_budget=" << resolved << " omega_excess_err=" << fmt(excess, 3)
           << " lambda_approx_worst_fraction=" << fmt(worst, 3);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const SpfTable table = build_spf_table(1000000);
  int identities = 0;
  for (const ThetaRule& th : {ThetaRule::dense(2.0), ThetaRule::practical()}) {
    for (std::uint64_t x : {1000u, 10000u, 100000u}) {
      const FunceqSides s = funceq_sides(th, x, table);
      o.check(s.holds(), "identity " + th.tag() + " x=" + std::to_string(x));
      identities += s.holds();
    }
  }
  std::uint64_t dense_checked = 0;
  for (const char* ts : {"2", "2.5", "3", "10"}) {
    const Ratio r = Ratio::parse(ts);
    const ThetaRule th = ThetaRule::dense(r);
    for (std::uint64_t n = 1; n <= 100000; ++n) {
      if (is_in_B(n, th, table) != is_t_dense_by_divisors(n, r, table)) {
        o.check(false, std::string("dense equivalence t=") + ts + " n=" + std::to_string(n));
        break;
      }
      ++dense_checked;
    }
  }
  std::uint64_t practical_checked = 0;
  const ThetaRule prac = ThetaRule::practical();
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    if (is_in_B(n, prac, table) != is_practical_by_subset_sum(n, table)) {
      o.check(false, "practical equivalence n=" + std::to_string(n));
      break;
    }
    ++practical_checked;
  }
  const double secs = seconds_since(t0);
  o.check(secs < 300.0, "runtime");
  o.detail << "identities=" << identities << "/6 dense_checked=" << dense_checked
           << " practical_checked=" << practical_checked << " time=" << fmt(secs, 3) << "s";
  return o;
}

const CompareRow& find_row(const std::vector<CompareRow>& rows, const std::string& prefix) {
  for (const CompareRow& r : rows) {
    if (r.quantity.rfind(prefix, 0) == 0) return r;
  }
  throw std::runtime_error("missing row " + prefix);
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const SpfTable table = build_spf_table(10000000);
  const MertensTable mertens(build_prime_list(100000));
  std::vector<double> errs;
  for (std::uint64_t x : {10000u, 100000u, 1000000u, 10000000u}) {
    const auto rows = compare_rough(x, std::cbrt(static_cast<double>(x)), table, mertens);
    errs.push_back(find_row(rows, "S/Phi").rel_err);
  }
  o.check(errs.back() < 0.25, "S/Phi error at 1e7");
  for (std::size_t i = 1; i < errs.size(); ++i) o.check(errs[i] < errs[i - 1], "S/Phi error not decreasing");

  const double tr = find_row(compare_dense(10000000, Ratio{100, 1}), "T/(x log t lambda)").exact;
  o.check(tr >= 0.7 && tr <= 1.3, "T ratio at t=100");

  const std::vector<std::uint64_t> cut{1000, 10000, 100000, 1000000, 10000000};
  std::ostringstream ls;
  for (const ThetaRule& th : {ThetaRule::dense(2.0), ThetaRule::practical()}) {
    const auto L = L_partial(th, cut);
    for (std::size_t i = 0; i < L.size(); ++i) {
      o.check(L[i] <= 1.0, "L_partial > 1 for " + th.tag());
      if (i > 0) o.check(L[i] >= L[i - 1], "L_partial decreasing for " + th.tag());
    }
    o.check(L.back() > 0.85, "L_partial(1e7) <= 0.85 for " + th.tag());
    ls << " L_" << th.tag() << "=" << fmt(L.back(), 6);
  }

  const auto nu = fit_nu_practical({10000000, 100000000});
  const double variation = std::abs(nu[1].ratio - nu[0].ratio) / nu[0].ratio;
  o.check(nu[1].ratio >= 0.45 && nu[1].ratio <= 0.65, "practical ratio outside [0.45,0.65]");
  o.check(variation < 0.10, "practical ratio variation");

  const double c = c_theta_partial(ThetaRule::practical(), 10000000);
  const double scaled = static_cast<double>(nu[1].count) * std::log(1e8) / 1e8;
  o.check(std::abs(c - scaled) < 0.1, "c_theta");

  const double secs = seconds_since(t0);
  o.check(secs < 1800.0, "runtime");
  o.detail << "S/Phi_err(1e4..1e7)=";
  for (std::size_t i = 0; i < errs.size(); ++i) o.detail << (i ? "," : "") << fmt(errs[i], 4);
  o.detail << " T_ratio=" << fmt(tr, 5) << ls.str() << " nu(1e7)=" << fmt(nu[0].ratio, 6)
           << " nu(1e8)=" << fmt(nu[1].ratio, 6) << " variation=" << fmt(variation, 3) << " c_theta=" << fmt(c, 6)
           << " B(1e8)log/1e8=" << fmt(scaled, 6) << " time=" << fmt(secs, 3) << "s";
  return o;
}

std::string run_cli(const std::string& cli, const std::string& args, int& status) {
  const std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing " + path + ">";
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion6(const std::string& cli, const std::string& golden) {
  Outcome o;
  if (cli.empty()) {
    o.check(false, "no --cli given");
    return o;
  }
  struct Case {
    std::string args;
    std::string golden;
  };
  const std::vector<Case> cases{
      {"constants", "constants.csv"},
      {"constants --json", "constants.json"},
      {"fn xi --from 0 --to 10 --step 0.25", "fn_xi.csv"},
      {"figures fig1", "fig1.csv"},
      {"figures fig2", "fig2.csv"},
      {"fn omega --from 0 --to 10 --step 0.5", ""},
      {"fn lambda --from 0 --to 50 --step 1", ""},
      {"--format json figures fig1", ""},
      {"enumerate practical --x 100000", ""},
      {"enumerate dense --x 100000 --t 2.5", ""},
      {"enumerate rough --x 100000 --y 50", ""},
      {"stats practical --x 10000000", ""},
      {"stats dense --x 10000000 --t 3", ""},
      {"stats rough --x 10000000 --y 1000", ""},
      {"verify rough --x 1000000 --y 100", ""},
      {"verify dense --x 1000000 --t 10", ""},
      {"verify funceq --theta practical --x 100000", ""},
      {"verify L --theta practical --N 1000000", ""},
      {"verify ctheta --theta practical --N 100000", ""},
  };
  int identical = 0, goldens = 0;
  for (const Case& c : cases) {
    int s1 = 0, s4 = 0;
    const std::string a = run_cli(cli, "--threads 1 " + c.args, s1);
    const std::string b = run_cli(cli, "--threads 4 " + c.args, s4);
    const bool same = !a.empty() && a == b && s1 == s4;
    o.check(same, "threads differ: " + c.args);
    identical += same;
    if (!c.golden.empty()) {
      const bool match = a == read_file(golden + "/" + c.golden);
      o.check(match, "golden mismatch: " + c.golden);
      goldens += match;
    }
  }
  o.detail << "commands_identical=" << identical << "/" << cases.size() << " goldens_matching=" << goldens << "/5";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli, golden;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--cli") cli = argv[i + 1];
    if (key == "--golden") golden = argv[i + 1];
  }
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5, [&] { return criterion6(cli, golden); }};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.check(false, e.what());
    }
    report(static_cast<int>(i + 1), o);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
