#include "divmean/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "divmean/errors.hpp"
#include "divmean/parallel.hpp"
#include "json.hpp"

namespace divmean {

namespace {

constexpr int kGaussNodes = 16;
constexpr int kMaxLevel = 10;
constexpr double kMaxPhase = 0.5;

double round15(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

const SpecialFunctions& fns() { return SpecialFunctions::shared(); }

double xi_excess(const PiecewiseFn& xi, double v) { return xi(v) - (v + 2.0) * kExpMinus2Gamma; }

void check_pole(cplx s) {
  if (std::abs(s) < 1e-12 || std::abs(s - 1.0) < 1e-12) {
    throw DomainError("g has a pole at s=" + format_real(s.real()) + (s.imag() >= 0 ? "+" : "") +
                      format_real(s.imag()) + "i");
  }
}

// sum_{k>=2} z^k / k!
double exp_tail2(double z) {
  double term = z * z / 2.0;
  double sum = 0.0;
  for (int k = 2; k < 60 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
    sum += term;
    term *= z / (k + 1);
  }
  return sum;
}

// J(u) + gamma + log u = sum_{k>=1} (-1)^{k+1} u^k / (k k!), starting at k = first.
double j_series(double u, int first) {
  double sum = 0.0;
  double pow_fact = 1.0;  // u^k / k!
  for (int k = 1; k < first; ++k) pow_fact *= u / k;
  for (int k = first; k < 80; ++k) {
    pow_fact *= u / k;
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * pow_fact / k;
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-300)) break;
  }
  return sum;
}

// Quadrature nodes for Q and its derivative; the integrand factor is s-independent.
struct MellinNodes {
  std::vector<double> log_u;
  std::vector<double> weight_f;  // w_j * F(u_j)
};

// Nodes for int_0^inf u^s F(u) du on geometric panels over (0, 1] and unit
// panels over [1, 60].
MellinNodes mellin_nodes(double (*small)(double), double (*large)(double)) {
  MellinNodes out;
  const GaussRule& rule = gauss_legendre(kGaussNodes);
  auto add_panel = [&](double lo, double hi, double (*f)(double)) {
    const double half = 0.5 * (hi - lo);
    const double mid = lo + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = mid + half * rule.nodes[i];
      out.log_u.push_back(std::log(u));
      out.weight_f.push_back(half * rule.weights[i] * f(u));
    }
  };
  for (int k = 70; k >= 0; --k) add_panel(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k), small);
  for (int k = 1; k < 60; ++k) add_panel(k, k + 1.0, large);
  return out;
}

cplx mellin_sum(const MellinNodes& nodes, cplx s, int log_power) {
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (std::size_t j = 0; j < nodes.log_u.size(); ++j) {
    const double lu = nodes.log_u[j];
    cplx term = nodes.weight_f[j] * std::exp(s * lu);
    for (int p = 0; p < log_power; ++p) term *= lu;
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

// e^{2J(u)} - 1 - b0 u^-2 - b1 u^-1 on (0, 1], free of cancellation:
// e^{2J} = e^{-2gamma} u^-2 e^{2u} e^{q},  q = 2 sum_{k>=2} (-1)^{k+1} u^k/(k k!).
double q_regular_small(double u) {
  const double q = 2.0 * j_series(u, 2);
  const double bracket = std::exp(2.0 * u) * std::expm1(q) + exp_tail2(2.0 * u);
  return kExpMinus2Gamma * bracket / (u * u) - 1.0;
}

double q_regular_large(double u) { return std::expm1(2.0 * exp_integral_J(u)); }

// e^{J(u)} - 1 - e^{-gamma}/u on (0, 1].
double buchstab_regular_small(double u) {
  const double p = j_series(u, 1);
  return kExpMinusGamma * std::expm1(p) / u - 1.0;
}

double buchstab_regular_large(double u) { return std::expm1(exp_integral_J(u)); }

const MellinNodes& q_nodes() {
  static const MellinNodes nodes = mellin_nodes(q_regular_small, q_regular_large);
  return nodes;
}

const MellinNodes& buchstab_nodes() {
  static const MellinNodes nodes = mellin_nodes(buchstab_regular_small, buchstab_regular_large);
  return nodes;
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo > 0.0 && fhi < 0.0) && !(flo < 0.0 && fhi > 0.0)) {
    throw SolverError("bisection: no sign change on [" + format_real(lo) + ", " + format_real(hi) + "]");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Points along the rectangle boundary, counterclockwise from the lower-left corner.
std::vector<cplx> contour_points(const Rect& r, double max_step) {
  const std::array<cplx, 5> corners{cplx(r.re_lo, r.im_lo), cplx(r.re_hi, r.im_lo), cplx(r.re_hi, r.im_hi),
                                    cplx(r.re_lo, r.im_hi), cplx(r.re_lo, r.im_lo)};
  std::vector<cplx> pts;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e];
    const cplx b = corners[e + 1];
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_step)));
    for (int k = 0; k < n; ++k) pts.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  pts.push_back(corners[0]);
  return pts;
}

struct SegmentResult {
  double darg = 0.0;
  double min_abs = 0.0;
  std::size_t samples = 0;
};

SegmentResult track_segment(const std::function<cplx(cplx)>& f, cplx a, cplx fa, cplx b, cplx fb, int depth) {
  const double d = std::arg(fb / fa);
  if (std::abs(d) < std::numbers::pi / 4) return {d, std::min(std::abs(fa), std::abs(fb)), 0};
  if (depth > 40) throw ContourError("winding: argument tracking failed to resolve near s=" + format_real(a.real()));
  const cplx m = 0.5 * (a + b);
  const cplx fm = f(m);
  SegmentResult left = track_segment(f, a, fa, m, fm, depth + 1);
  SegmentResult right = track_segment(f, m, fm, b, fb, depth + 1);
  return {left.darg + right.darg, std::min(left.min_abs, right.min_abs), left.samples + right.samples + 1};
}

}  // namespace

std::string to_string(RootMethod m) { return m == RootMethod::real_bisection ? "real-bisection" : "complex-refine"; }

static nlohmann::ordered_json certificate_object(const RootCertificate& cert) {
  nlohmann::ordered_json j;
  j["location"] = {{"re", round15(cert.location.real())}, {"im", round15(cert.location.imag())}};
  j["enclosure"] = {{"re_lo", round15(cert.enclosure.re_lo)},
                    {"re_hi", round15(cert.enclosure.re_hi)},
                    {"im_lo", round15(cert.enclosure.im_lo)},
                    {"im_hi", round15(cert.enclosure.im_hi)}};
  j["winding"] = cert.winding;
  j["residual"] = round15(cert.residual);
  j["residue"] = {{"re", round15(cert.residue.real())}, {"im", round15(cert.residue.imag())}};
  j["method"] = to_string(cert.method);
  j["truncation_V"] = round15(cert.truncation_V);
  return j;
}

std::string certificate_json(const RootCertificate& cert, int indent) {
  return certificate_object(cert).dump(indent);
}

GEvaluator::GEvaluator(const PiecewiseFn& xi, double V) : xi_(&xi), V_(V) {
  if (!(V >= 1.0) || V > xi.grid_end()) throw RangeError("GEvaluator: truncation V out of range");
  const GaussRule& rule = gauss_legendre(kGaussNodes);
  for (double lo = 0.0; lo < V; lo += 1.0) {
    Panel panel{lo, std::min(lo + 1.0, V), {}};
    for (int level = 0; level <= kMaxLevel; ++level) {
      Level lv;
      const int pieces = 1 << level;
      const double width = (panel.hi - panel.lo) / pieces;
      for (int k = 0; k < pieces; ++k) {
        const double half = 0.5 * width;
        const double mid = panel.lo + k * width + half;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double v = mid + half * rule.nodes[i];
          lv.weight_delta.push_back(half * rule.weights[i] * xi_excess(xi, v));
          lv.log1p_v.push_back(std::log1p(v));
        }
      }
      panel.levels.push_back(std::move(lv));
    }
    panels_.push_back(std::move(panel));
  }
}

cplx GEvaluator::sum(cplx s, bool derivative, int level_shift) const {
  const cplx a = -(s + 1.0);
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (const Panel& panel : panels_) {
    const double dlog = std::log1p(panel.hi) - std::log1p(panel.lo);
    const double phase = std::abs(s + 1.0) * dlog / kMaxPhase;
    int level = 1;
    while ((1 << level) < phase) ++level;
    level += level_shift;
    if (level > kMaxLevel) throw RangeError("g: |s| too large for the quadrature table");
    const Level& lv = panel.levels[level];
    for (std::size_t j = 0; j < lv.log1p_v.size(); ++j) {
      cplx term = lv.weight_delta[j] * std::exp(a * lv.log1p_v[j]);
      if (derivative) term *= -lv.log1p_v[j];
      re.add(term.real());
      im.add(term.imag());
    }
  }
  return {re.value(), im.value()};
}

cplx GEvaluator::value(cplx s) const {
  check_pole(s);
  return 1.0 + sum(s, false, 0) + kExpMinus2Gamma / s + kExpMinus2Gamma / (s - 1.0);
}

cplx GEvaluator::derivative(cplx s) const {
  check_pole(s);
  return sum(s, true, 0) - kExpMinus2Gamma / (s * s) - kExpMinus2Gamma / ((s - 1.0) * (s - 1.0));
}

GValue GEvaluator::evaluate(cplx s) const {
  const cplx v = value(s);
  const cplx finer = 1.0 + sum(s, false, 1) + kExpMinus2Gamma / s + kExpMinus2Gamma / (s - 1.0);
  return {v, std::abs(finer - v), tail_bound_at(s.real())};
}

GValue GEvaluator::evaluate_derivative(cplx s) const {
  const cplx d = derivative(s);
  const cplx finer = sum(s, true, 1) - kExpMinus2Gamma / (s * s) - kExpMinus2Gamma / ((s - 1.0) * (s - 1.0));
  // log(v+1) <= v+1, so the derivative tail is bounded by the tail one unit left.
  return {d, std::abs(finer - d), tail_bound_at(s.real() - 1.0)};
}

double GEvaluator::tail_bound_at(double sigma) const {
  const double err = xi_->err_budget();
  auto weight = [sigma](double v) { return std::exp((-sigma - 1.0) * std::log1p(v)); };
  const double numeric_end = std::min(30.0, xi_->grid_end());
  double total = 0.0;
  if (V_ < numeric_end) {
    std::vector<double> breaks{V_, numeric_end};
    for (double k = std::ceil(V_); k < numeric_end; k += 1.0) breaks.push_back(k);
    std::sort(breaks.begin(), breaks.end());
    total += integrate_panels([&](double v) { return (std::abs(xi_excess(*xi_, v)) + err) * weight(v); }, breaks, 8,
                              1.0 / 64);
  }
  const double env_start = std::max(V_, numeric_end);
  total += integrate_gauss([&](double v) { return xi_envelope(v) * weight(v); }, env_start, env_start + 80.0, 16, 160);
  return total;
}

double GEvaluator::envelope_tail_bound_at(double sigma) const {
  auto weight = [sigma](double v) { return std::exp((-sigma - 1.0) * std::log1p(v)); };
  return integrate_gauss([&](double v) { return xi_envelope(v) * weight(v); }, V_, V_ + 80.0, 16, 160);
}

GValue g_eval(cplx s, double V) { return GEvaluator(fns().xi_fn(), V).evaluate(s); }

GValue g_prime_eval(cplx s, double V) { return GEvaluator(fns().xi_fn(), V).evaluate_derivative(s); }

WindingResult winding_number(const std::function<cplx(cplx)>& f, const Rect& rect, double max_step, double margin) {
  const std::vector<cplx> pts = contour_points(rect, max_step);
  const std::vector<cplx> vals = parallel_map(pts.size(), [&](std::size_t i) { return f(pts[i]); });
  const std::vector<SegmentResult> segs = parallel_map(pts.size() - 1, [&](std::size_t i) {
    return track_segment(f, pts[i], vals[i], pts[i + 1], vals[i + 1], 0);
  });
  WindingResult out;
  out.min_abs = std::abs(vals[0]);
  out.samples = pts.size();
  CompensatedSum<double> total;
  for (const SegmentResult& s : segs) {
    total.add(s.darg);
    out.min_abs = std::min(out.min_abs, s.min_abs);
    out.samples += s.samples;
  }
  if (out.min_abs < margin) {
    throw ContourError("winding: |f| = " + format_real(out.min_abs) + " on the contour is below the margin " +
                       format_real(margin) + "; move the contour");
  }
  out.turns = total.value() / (2.0 * std::numbers::pi);
  out.winding = static_cast<int>(std::lround(out.turns));
  return out;
}

int count_zeros_rect(const Rect& rect, double V) {
  const GEvaluator g(fns().xi_fn(), V);
  return winding_number([&g](cplx s) { return g.value(s); }, rect).winding;
}

double boundary_min_abs(const Rect& rect, double V, double step) {
  const GEvaluator g(fns().xi_fn(), V);
  const std::vector<cplx> pts = contour_points(rect, step);
  const std::vector<double> mags = parallel_map(pts.size(), [&](std::size_t i) { return std::abs(g.value(pts[i])); });
  std::vector<std::size_t> local_min;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (mags[i] <= mags[i - 1] && mags[i] <= mags[i + 1]) local_min.push_back(i);
  }
  const std::vector<double> refined = parallel_map(local_min.size(), [&](std::size_t k) {
    const std::size_t i = local_min[k];
    // Golden-section search on the straight piece between the neighbours.
    // Neighbours on different edges meet at a corner; search each half.
    auto search = [&](cplx a, cplx b) {
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = 0.0;
      double hi = 1.0;
      auto at = [&](double t) { return std::abs(g.value(a + (b - a) * t)); };
      double x1 = hi - phi * (hi - lo);
      double x2 = lo + phi * (hi - lo);
      double f1 = at(x1);
      double f2 = at(x2);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = at(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = at(x2);
        }
      }
      return std::min({f1, f2, std::abs(g.value(a)), std::abs(g.value(b))});
    };
    return std::min(search(pts[i - 1], pts[i]), search(pts[i], pts[i + 1]));
  });
  double best = *std::min_element(mags.begin(), mags.end());
  for (double r : refined) best = std::min(best, r);
  return best;
}

RootCertificate find_delta_via_g(double V) {
  const GEvaluator g(fns().xi_fn(), V);
  const double delta = bisect([&g](double s) { return g.value(cplx(s, 0.0)).real(); }, 0.1, 0.9);
  RootCertificate cert;
  cert.location = cplx(delta, 0.0);
  cert.method = RootMethod::real_bisection;
  cert.truncation_V = V;
  cert.residual = std::abs(g.value(cert.location));
  cert.enclosure = Rect::square(cert.location, 1e-3);
  cert.winding = winding_number([&g](cplx s) { return g.value(s); }, cert.enclosure, 2e-4).winding;
  cert.residue = 1.0 / (cert.location * (cert.location - 1.0) * g.derivative(cert.location));
  return cert;
}

RootCertificate refine_zero(cplx seed, double V, double half_width) {
  const GEvaluator g(fns().xi_fn(), V);
  cplx s = seed;
  bool converged = false;
  try {
    for (int iter = 0; iter < 60; ++iter) {
      const cplx step = g.value(s) / g.derivative(s);
      s -= step;
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) break;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) {
        converged = true;
        break;
      }
    }
  } catch (const RangeError&) {
    throw SolverError("refine_zero: Newton iteration left the evaluation range");
  } catch (const DomainError&) {
    throw SolverError("refine_zero: Newton iteration hit a pole");
  }
  RootCertificate cert;
  cert.location = s;
  cert.method = RootMethod::complex_refine;
  cert.truncation_V = V;
  cert.residual = std::isfinite(s.real()) ? std::abs(g.value(s)) : INFINITY;
  if (!converged && !(cert.residual <= 1e-10)) {
    throw SolverError("refine_zero: Newton iteration from seed did not converge");
  }
  if (!(cert.residual <= 1e-10)) throw SolverError("refine_zero: residual " + format_real(cert.residual));
  cert.enclosure = Rect::square(s, half_width);
  cert.winding = winding_number([&g](cplx z) { return g.value(z); }, cert.enclosure, half_width / 5).winding;
  if (cert.winding != 1) {
    throw SolverError("refine_zero: winding " + std::to_string(cert.winding) + " around the refined point");
  }
  cert.residue = 1.0 / (s * (s - 1.0) * g.derivative(s));
  return cert;
}

cplx residue_at(const RootCertificate& cert) {
  const GEvaluator g(fns().xi_fn(), cert.truncation_V);
  const cplx s = cert.location;
  return 1.0 / (s * (s - 1.0) * g.derivative(s));
}

double exp_integral_J(double u) {
  if (!(u > 0.0)) throw DomainError("exp_integral_J: u must be positive");
  if (u <= 1.0) return -kEulerGamma - std::log(u) + j_series(u, 1);
  // Continued fraction for E1, modified Lentz.
  constexpr double kTiny = 1e-300;
  double b = u + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-u);
}

std::pair<double, double> q_singular_coefficients() { return {kExpMinus2Gamma, 2.0 * kExpMinus2Gamma}; }

cplx Q_eval(cplx s) {
  check_pole(s);
  const auto [b0, b1] = q_singular_coefficients();
  return mellin_sum(q_nodes(), s, 0) + b0 / (s - 1.0) + b1 / s;
}

double Q_eval(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("Q_eval: s must lie in (0, 1)");
  return Q_eval(cplx(s, 0.0)).real();
}

cplx Q_prime_eval(cplx s) {
  check_pole(s);
  const auto [b0, b1] = q_singular_coefficients();
  return mellin_sum(q_nodes(), s, 1) - b0 / ((s - 1.0) * (s - 1.0)) - b1 / (s * s);
}

RootCertificate find_delta_via_Q() {
  const double delta = bisect([](double s) { return Q_eval(cplx(s, 0.0)).real(); }, 0.1, 0.9);
  RootCertificate cert;
  cert.location = cplx(delta, 0.0);
  cert.method = RootMethod::real_bisection;
  cert.truncation_V = INFINITY;
  cert.residual = std::abs(Q_eval(cert.location));
  cert.enclosure = Rect::square(cert.location, 1e-3);
  cert.winding = winding_number([](cplx s) { return Q_eval(s); }, cert.enclosure, 2e-4).winding;
  const double g_prime = (delta + 1.0) * Q_prime_eval(cert.location).real() / (2.0 * std::tgamma(delta + 1.0));
  cert.residue = 1.0 / (delta * (delta - 1.0) * g_prime);
  return cert;
}

std::pair<double, double> q_g_consistency(double s, double V) {
  const GEvaluator g(fns().xi_fn(), V);
  return {(s + 1.0) * Q_eval(cplx(s, 0.0)).real(), 2.0 * std::tgamma(s + 1.0) * g.value(cplx(s, 0.0)).real()};
}

double lambda0_via_I(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("lambda0_via_I: delta must lie in (0, 1)");
  const PiecewiseFn& xi = fns().xi_fn();
  const double end = std::min(40.0, xi.grid_end());
  std::vector<double> breaks;
  for (double k = 0.0; k <= end; k += 1.0) breaks.push_back(k);
  auto integrand = [&](double v) {
    const double l = std::log1p(v);
    return xi_excess(xi, v) * l * std::exp(-(1.0 + delta) * l);
  };
  const double integral = integrate_panels(integrand, breaks, 20, 0.125);
  const double I = -integral - kExpMinus2Gamma / (delta * delta) - kExpMinus2Gamma / ((delta - 1.0) * (delta - 1.0));
  return 1.0 / (delta * (delta - 1.0) * I);
}

double H_bound(double sigma) {
  const SpecialFunctions& sf = fns();
  const double numeric_end = 30.0;
  std::vector<double> breaks;
  for (double k = 1.0; k <= numeric_end; k += 1.0) breaks.push_back(k);
  auto weight = [sigma](double v) { return std::exp(-sigma * std::log1p(v)); };
  const double body = integrate_panels(
      [&](double v) { return (std::abs(sf.xi_prime(v) - kExpMinus2Gamma) + 2.0 * sf.xi_fn().err_budget()) * weight(v); },
      breaks, 8, 1.0 / 64);
  const double tail =
      integrate_gauss([&](double v) { return xi_envelope(v) * weight(v); }, numeric_end, numeric_end + 80.0, 16, 160);
  return std::exp2(1.0 - sigma) + body + tail;
}

std::pair<double, double> buchstab_transform_check(double s) {
  if (!(s > 1.0)) throw DomainError("buchstab_transform_check: s must exceed 1");
  const double lhs =
      s * (mellin_sum(buchstab_nodes(), cplx(s - 1.0, 0.0), 0).real() + kExpMinusGamma / (s - 1.0));
  const PiecewiseFn& om = fns().omega_fn();
  const double end = om.grid_end();
  std::vector<double> breaks;
  for (double k = 1.0; k <= end; k += 1.0) breaks.push_back(k);
  const double body = integrate_panels([&](double v) { return om(v) * std::exp(-s * std::log1p(v)); }, breaks, 16, 0.25);
  const double tail = kExpMinusGamma * std::exp((1.0 - s) * std::log1p(end)) / (s - 1.0);
  const double rhs = std::tgamma(s) * (1.0 + body + tail);
  return {lhs, rhs};
}

double lambda1_exact() { return 2.0 / (3.0 * kExpMinus2Gamma - 2.0); }

ConstantsReport compute_constants(double V) {
  ConstantsReport r;
  r.delta_g = find_delta_via_g(V);
  r.delta_Q = find_delta_via_Q();
  r.lambda0_I = lambda0_via_I(r.delta());
  r.pole_minus1 = refine_zero(cplx(-1.0, 0.0), std::max(V, kLambda1TruncationV));
  r.lambda1_closed = lambda1_exact();
  r.complex_pair = refine_zero(cplx(-1.962, 11.575), V);
  r.zeros_in_R = count_zeros_rect(kCensusRect, 5.0);
  r.zeros_in_square = count_zeros_rect(kPairSquare, V);
  const GEvaluator g5(fns().xi_fn(), 5.0);
  r.tail_bound_V5 = g5.tail_bound_at(kCensusRect.re_lo);
  r.boundary_min_V5 = boundary_min_abs(kCensusRect, 5.0);
  r.H_minus3 = H_bound(-3.0);
  return r;
}

const ConstantsReport& constants_report() {
  static const ConstantsReport report = compute_constants();
  return report;
}

std::string constants_text(const ConstantsReport& r) {
  std::string out = "key,value\n";
  auto line = [&out](const std::string& k, const std::string& v) { out += k + "," + v + "\n"; };
  auto real = [&line](const std::string& k, double v) { line(k, format_real(v)); };
  real("delta", r.delta());
  real("delta_via_Q", r.delta_Q.location.real());
  real("lambda0", r.lambda0());
  real("lambda0_via_Q", r.delta_Q.residue.real());
  real("lambda0_via_I", r.lambda0_I);
  real("lambda1", r.lambda1());
  real("lambda1_closed_form", r.lambda1_closed);
  real("pair_re", r.complex_pair.location.real());
  real("pair_im", r.complex_pair.location.imag());
  real("pair_residue_re", r.complex_pair.residue.real());
  real("pair_residue_im", r.complex_pair.residue.imag());
  line("zeros_in_R", std::to_string(r.zeros_in_R));
  line("zeros_in_square", std::to_string(r.zeros_in_square));
  real("tail_bound_V5", r.tail_bound_V5);
  real("boundary_min_V5", r.boundary_min_V5);
  real("H_minus3", r.H_minus3);
  return out;
}

std::string constants_json(const ConstantsReport& r, int indent) {
  nlohmann::ordered_json j;
  j["delta"] = round15(r.delta());
  j["lambda0"] = round15(r.lambda0());
  j["lambda0_via_I"] = round15(r.lambda0_I);
  j["lambda1"] = round15(r.lambda1());
  j["lambda1_closed_form"] = round15(r.lambda1_closed);
  j["roots"] = nlohmann::ordered_json::array({certificate_object(r.delta_g), certificate_object(r.delta_Q),
                                              certificate_object(r.pole_minus1),
                                              certificate_object(r.complex_pair)});
  j["census"] = {{"rect", {{"re_lo", kCensusRect.re_lo},
                           {"re_hi", kCensusRect.re_hi},
                           {"im_lo", kCensusRect.im_lo},
                           {"im_hi", kCensusRect.im_hi}}},
                 {"truncation_V", 5},
                 {"zeros", r.zeros_in_R},
                 {"zeros_in_pair_square", r.zeros_in_square},
                 {"tail_bound", round15(r.tail_bound_V5)},
                 {"boundary_min_abs", round15(r.boundary_min_V5)},
                 {"H_minus3", round15(r.H_minus3)}};
  return j.dump(indent);
}

}  // namespace divmean
