#include <cmath>
#include <random>

#include "divmean/constants.hpp"
#include "divmean/errors.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace divmean;

namespace {

const ConstantsReport& R() { return constants_report(); }

// E1 by its convergent power series.
double j_series(double u) {
  double term = 1.0, sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= u / k;
    const double add = (k % 2 ? 1.0 : -1.0) * term / k;
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return sum - kEulerGamma - std::log(u);
}

}  // namespace

TEST_CASE("g vanishes at -1 and delta") {
  const GValue a = g_eval(cplx(-1.0, 0.0), 6.0);
  CHECK(std::abs(a.value) <= a.quad_error + a.tail_bound + 1e-9);
  const GValue b = g_eval(cplx(0.7136125, 0.0), 6.0);
  CHECK(std::abs(b.value) <= b.quad_error + b.tail_bound + 1e-6);
  CHECK(g_eval(cplx(0.99, 0.0), 6.0).value.real() < -10.0);
  CHECK_THROWS_AS(g_eval(cplx(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(g_eval(cplx(0.0, 0.0)), DomainError);
}

TEST_CASE("analytic derivative against a central difference") {
  for (cplx s : {cplx(0.5, 0.0), cplx(-1.5, 3.0), cplx(-2.0, 11.5), cplx(2.5, -40.0)}) {
    const double h = 1e-5;
    const cplx fd = (g_eval(s + h, 6.0).value - g_eval(s - h, 6.0).value) / (2.0 * h);
    CHECK(std::abs(g_prime_eval(s, 6.0).value - fd) <= 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("conjugate symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(-60.0, 60.0);
  for (int i = 0; i < 20; ++i) {
    const cplx s(re(rng), im(rng));
    const cplx a = g_eval(s, 6.0).value;
    const cplx b = g_eval(std::conj(s), 6.0).value;
    CHECK(std::abs(a - std::conj(b)) <= 1e-12 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("delta by bisection of g") {
  const RootCertificate& c = R().delta_g;
  CHECK(std::abs(c.location.real() - 0.7136125) <= 1e-6);
  CHECK(c.location.real() > 0.713611);
  CHECK(c.location.real() < 0.713614);
  CHECK(c.winding == 1);
  CHECK(c.method == RootMethod::real_bisection);
  const GEvaluator g(SpecialFunctions::shared().xi_fn(), 6.0);
  CHECK(g.value(cplx(0.1, 0.0)).real() > 0.0);
  CHECK(g.value(cplx(0.9, 0.0)).real() < 0.0);
  const RootCertificate v5 = find_delta_via_g(5.0);
  CHECK(std::abs(v5.location.real() - c.location.real()) < 1e-5);
}

TEST_CASE("exponential integral") {
  CHECK(exp_integral_J(1.0) == doctest::Approx(0.2193839).epsilon(1e-7));
  CHECK(std::abs(exp_integral_J(1.0) - j_series(1.0)) <= 1e-13 * j_series(1.0));
  for (double u : {0.01, 0.3, 0.99, 1.01, 2.0, 5.0, 20.0, 50.0}) {
    const double ref = -std::expint(-u);
    CHECK(std::abs(exp_integral_J(u) - ref) <= 1e-13 * ref);
    if (u <= 2.0) CHECK(std::abs(exp_integral_J(u) - j_series(u)) <= 1e-13 * ref);
  }
  CHECK(std::abs(exp_integral_J(1e-8) + kEulerGamma + std::log(1e-8)) < 1e-7);
  CHECK(exp_integral_J(10.0) < std::exp(-10.0) / 10.0);
  CHECK_THROWS_AS(exp_integral_J(0.0), DomainError);
  CHECK_THROWS_AS(exp_integral_J(-1.0), DomainError);
}

TEST_CASE("singular coefficients of e^{2J} - 1") {
  const auto [b0, b1] = q_singular_coefficients();
  CHECK(b0 == doctest::Approx(kExpMinus2Gamma).epsilon(1e-15));
  CHECK(b1 == doctest::Approx(2.0 * kExpMinus2Gamma).epsilon(1e-15));
  // u^2 (e^{2J(u)} - 1) = b0 + b1 u + O(u^2)
  for (double u : {1e-3, 1e-4}) {
    const double lhs = u * u * std::expm1(2.0 * j_series(u));
    CHECK(std::abs(lhs - b0 - b1 * u) < 10.0 * u * u);
  }
}

TEST_CASE("delta via Q agrees with delta via g") {
  const RootCertificate& q = R().delta_Q;
  CHECK(std::abs(q.location.real() - R().delta()) <= 1e-6);
  CHECK(q.location.real() > 0.713611);
  CHECK(q.location.real() < 0.713614);
  CHECK(Q_eval(0.5) * Q_eval(0.9) < 0.0);
  CHECK(std::abs(q.residue.real() - R().lambda0()) <= 1e-5);
}

TEST_CASE("Q and g consistency") {
  const auto [lhs, rhs] = q_g_consistency(2.0, 6.0);
  CHECK(std::abs(lhs - rhs) <= 1e-6);
  // away from s = 2 the truncation tail of g_6 dominates
  for (double s : {0.5, -0.5}) {
    const auto [l, r] = q_g_consistency(s, 6.0);
    CHECK(std::abs(l - r) <= 1e-5);
  }
}

TEST_CASE("zero census") {
  CHECK(R().zeros_in_R == 2);
  CHECK(R().zeros_in_square == 1);
  CHECK(count_zeros_rect({2.1, 3.0, -62.0, 62.0}, 6.0) == 0);
  CHECK(count_zeros_rect(Rect::square(cplx(0.0, 0.0), 0.05), 6.0) == -1);
  CHECK(count_zeros_rect(Rect::square(cplx(1.0, 0.0), 0.05), 6.0) == -1);
  CHECK(count_zeros_rect(Rect::square(cplx(R().delta(), 0.0), 0.1), 6.0) == 1);
  CHECK(count_zeros_rect(Rect::square(cplx(-1.0, 0.0), 0.1), 6.0) == 1);
  CHECK(count_zeros_rect(Rect::square(std::conj(R().complex_pair.location), 0.1), 6.0) == 1);
}

TEST_CASE("Rouche margins") {
  CHECK(R().tail_bound_V5 < 0.0035);
  CHECK(R().boundary_min_V5 > 0.0051);
}

TEST_CASE("winding number refuses contours through a zero") {
  auto f = [](cplx s) { return s; };
  CHECK_THROWS_AS(winding_number(f, {0.0, 1.0, -1.0, 1.0}), ContourError);
  CHECK(winding_number(f, {-1.0, 1.0, -1.0, 1.0}).winding == 1);
  auto g = [](cplx s) { return (s - cplx(0.3, 0.2)) * (s + cplx(0.1, 0.4)) / (s - cplx(0.5, -0.5)); };
  CHECK(winding_number(g, {-1.0, 1.0, -1.0, 1.0}).winding == 1);
}

TEST_CASE("residues") {
  CHECK(R().lambda0() == doctest::Approx(1.118192).epsilon(1e-6));
  CHECK(std::abs(R().lambda0() - 1.118192) < 5e-7);
  CHECK(std::abs(R().lambda1() - lambda1_exact()) <= 1e-6);
  CHECK(std::abs(lambda1_exact() - (-1.897011717700828)) < 1e-14);
  const RootCertificate& p = R().complex_pair;
  CHECK(p.winding == 1);
  CHECK(p.residual <= 1e-10);
  CHECK(std::abs(p.location.real() - (-1.962)) < 1e-3);
  CHECK(std::abs(p.location.imag() - 11.57) < 1e-2);
  CHECK(std::abs(p.residue.real()) == doctest::Approx(0.0078).epsilon(0.013));
  CHECK(std::abs(p.residue.imag()) == doctest::Approx(0.0031).epsilon(0.033));
  CHECK(std::trunc(std::abs(p.residue.real()) * 1e4) == 78.0);
  CHECK(std::trunc(std::abs(p.residue.imag()) * 1e4) == 31.0);
  CHECK(residue_at(R().delta_g).real() == doctest::Approx(R().lambda0()).epsilon(1e-12));
  CHECK_THROWS_AS(refine_zero(cplx(2.5, 0.0), 6.0), SolverError);
}

TEST_CASE("lambda0 through the real integral") {
  const double d = R().delta();
  CHECK(d * (d - 1.0) < 0.0);
  const double l = lambda0_via_I(d);
  CHECK(l > 0.0);
  CHECK(std::abs(l - R().lambda0()) <= 1e-5);
  CHECK(l == doctest::Approx(1.118192).epsilon(1e-6));
}

TEST_CASE("H bound") {
  CHECK(R().H_minus3 < 62.0);
  CHECK(H_bound(1.0) < H_bound(0.0));
  double prev = H_bound(-3.0);
  for (double s = -2.5; s <= 2.0; s += 0.5) {
    const double h = H_bound(s);
    CHECK(h < prev);
    prev = h;
  }
}

TEST_CASE("Buchstab transform identity") {
  for (double s : {2.0, 3.0}) {
    const auto [lhs, rhs] = buchstab_transform_check(s);
    CHECK(std::abs(lhs - rhs) <= 1e-6);
  }
  const auto [a, b] = buchstab_transform_check(1.05);
  const auto [c, d] = buchstab_transform_check(1.02);
  CHECK(c > a);
  CHECK(std::abs(std::log(a / b)) < 1e-5);
  CHECK(std::abs(std::log(c / d)) < 1e-5);
}

TEST_CASE("tail bounds") {
  const GEvaluator g5(SpecialFunctions::shared().xi_fn(), 5.0);
  const GEvaluator g6(SpecialFunctions::shared().xi_fn(), 6.0);
  CHECK(g5.tail_bound() < 0.0035);
  CHECK(g6.tail_bound() < g5.tail_bound());
  CHECK(g5.envelope_tail_bound_at(-3.0) >= g5.tail_bound_at(-3.0));
  // |g_5 - g_6| is what the V=5 bound must cover
  for (cplx s : {cplx(-3.0, 0.0), cplx(-3.0, 30.0), cplx(0.0, 62.0)}) {
    CHECK(std::abs(g5.value(s) - g6.value(s)) <= g5.tail_bound_at(s.real()));
  }
}

TEST_CASE("certificate JSON") {
  const auto j = nlohmann::json::parse(certificate_json(R().complex_pair));
  for (const char* key : {"location", "enclosure", "winding", "residual", "residue", "method", "truncation_V"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["method"] == "complex-refine");
  CHECK(j["winding"] == 1);
  const auto doc = nlohmann::json::parse(constants_json(R()));
  CHECK(doc["roots"].size() == 4);
  CHECK(doc["census"]["zeros"] == 2);
}
