#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "divmean/numeric.hpp"
#include "divmean/special.hpp"

namespace divmean {

struct Rect {
  double re_lo;
  double re_hi;
  double im_lo;
  double im_hi;

  bool contains(cplx s) const {
    return s.real() > re_lo && s.real() < re_hi && s.imag() > im_lo && s.imag() < im_hi;
  }
  static Rect square(cplx center, double half_width) {
    return {center.real() - half_width, center.real() + half_width, center.imag() - half_width,
            center.imag() + half_width};
  }
};

enum class RootMethod { real_bisection, complex_refine };

std::string to_string(RootMethod m);

// A located zero of g (equivalently a pole of the Laplace transform of
// lambda(e^z - 1)) with the evidence that certifies it.
struct RootCertificate {
  cplx location;
  Rect enclosure;
  int winding = 0;
  double residual = 0.0;  // |g| at the located root
  cplx residue;           // 1 / (s (s-1) g'(s))
  RootMethod method = RootMethod::complex_refine;
  double truncation_V = 6.0;
};

// {location:{re,im}, enclosure:{re_lo,re_hi,im_lo,im_hi}, winding, residual,
//  residue:{re,im}, method, truncation_V}
std::string certificate_json(const RootCertificate& cert, int indent = -1);

struct GValue {
  cplx value;
  double quad_error;   // difference against the next finer quadrature level
  double tail_bound;   // |g - g_V| bound for this Re(s)
};

// g_V(s) = 1 + int_0^V (xi(v) - (v+2)e^{-2gamma}) (v+1)^{-s-1} dv
//            + e^{-2gamma}/s + e^{-2gamma}/(s-1)
// with Gauss-Legendre panels aligned to the integers, refined in log(v+1) so
// the phase Im(s) log(v+1) advances at most half a radian per sub-panel.
class GEvaluator {
 public:
  explicit GEvaluator(const PiecewiseFn& xi, double V = 6.0);

  double truncation() const { return V_; }

  cplx value(cplx s) const;
  cplx derivative(cplx s) const;
  GValue evaluate(cplx s) const;
  GValue evaluate_derivative(cplx s) const;

  // Bound on |g(s) - g_V(s)| valid for Re(s) >= sigma: the tabulated
  // |xi - (v+2)e^{-2gamma}| (plus its error budget) on [V, 30] and the
  // 2^v/(7 Gamma(v+1)) envelope beyond.
  double tail_bound_at(double sigma) const;
  // Same, using only the 2^v/(7 Gamma(v+1)) envelope from V on.
  double envelope_tail_bound_at(double sigma) const;
  // tail_bound_at(-3), the region used for the zero census.
  double tail_bound() const { return tail_bound_at(-3.0); }

 private:
  struct Level {
    std::vector<double> weight_delta;  // w_j * (xi(v_j) - (v_j+2)e^{-2gamma})
    std::vector<double> log1p_v;       // log(v_j + 1)
  };
  struct Panel {
    double lo;
    double hi;
    std::vector<Level> levels;  // level L has 2^L sub-panels
  };

  cplx sum(cplx s, bool derivative, int level_shift) const;

  const PiecewiseFn* xi_;
  double V_;
  std::vector<Panel> panels_;
};

GValue g_eval(cplx s, double V = 6.0);
GValue g_prime_eval(cplx s, double V = 6.0);

struct WindingResult {
  int winding = 0;
  double turns = 0.0;       // unrounded argument change / 2 pi
  double min_abs = 0.0;     // smallest |f| among the contour samples
  std::size_t samples = 0;
};

// Counterclockwise winding number of f around the rectangle, tracking the
// argument between samples and bisecting wherever it moves by pi/4 or more.
// Throws ContourError if |f| falls below `margin` on the contour.
WindingResult winding_number(const std::function<cplx(cplx)>& f, const Rect& rect, double max_step = 0.05,
                             double margin = 1e-9);

// (#zeros - #poles) of g_V inside the rectangle.
int count_zeros_rect(const Rect& rect, double V = 6.0);

// Minimum of |g_V| on the boundary: a scan at `step` followed by golden
// section refinement around each sampled local minimum.
double boundary_min_abs(const Rect& rect, double V = 5.0, double step = 0.02);

// Real bisection of g_V on (0.1, 0.9).
RootCertificate find_delta_via_g(double V = 6.0);

// Newton iteration with the analytic g'; certified by a winding check on a
// square of the given half-width around the result.
RootCertificate refine_zero(cplx seed, double V = 6.0, double half_width = 1e-3);

cplx residue_at(const RootCertificate& cert);

// J(u) = int_u^inf e^{-t}/t dt (the exponential integral E1).
double exp_integral_J(double u);

// Coefficients b0, b1 of the singular part b0 u^-2 + b1 u^-1 of e^{2J(u)} - 1.
std::pair<double, double> q_singular_coefficients();

// Q continued from int_0^inf u^s (e^{2J(u)} - 1) du by subtracting the
// singular part on [0, 1]. Meromorphic with poles at s = 0 and s = 1.
cplx Q_eval(cplx s);
double Q_eval(double s);
cplx Q_prime_eval(cplx s);

// Root of Q in (0, 1) by bisection; residue via g'(delta) = (delta+1) Q'(delta) / (2 Gamma(delta+1)).
RootCertificate find_delta_via_Q();

// ((s+1) Q(s), 2 Gamma(s+1) g_V(s)); equal for every s.
std::pair<double, double> q_g_consistency(double s, double V = 6.0);

// lambda_0 = (delta (delta-1) I)^{-1} with I the real integral over [0, inf).
double lambda0_via_I(double delta);

// H(sigma) = 2^{1-sigma} + int_1^inf |xi'(v) - e^{-2gamma}| (v+1)^{-sigma} dv.
double H_bound(double sigma);

// (s int_0^inf u^{s-1}(e^{J(u)} - 1) du,  Gamma(s)(1 + int_0^inf omega(v)(1+v)^{-s} dv)), s > 1.
std::pair<double, double> buchstab_transform_check(double s);

// 2 / (3 e^{-2gamma} - 2).
double lambda1_exact();

// Truncation used for the residue at s = -1. The tail of g - g_V at Re(s) = -1
// decays like 2^V / Gamma(V+1), and V = 6 leaves it near 10^-5 in lambda_1.
inline constexpr double kLambda1TruncationV = 8.0;

inline constexpr double kDefaultTruncationV = 6.0;

struct ConstantsReport {
  RootCertificate delta_g;       // real bisection of g_V on (0.1, 0.9)
  RootCertificate delta_Q;       // real bisection of Q
  double lambda0_I = 0.0;        // (delta (delta-1) I)^{-1}
  RootCertificate pole_minus1;   // zero of g near s = -1
  double lambda1_closed = 0.0;
  RootCertificate complex_pair;  // upper member of the pair near -1.962 + 11.575i
  int zeros_in_R = 0;            // Re in [-3, 3], Im in [-62, 62], V = 5
  int zeros_in_square = 0;       // [-1.963, -1.961] x [11.574, 11.576]
  double tail_bound_V5 = 0.0;    // |g - g_5| on Re(s) >= -3
  double boundary_min_V5 = 0.0;  // min |g_5| on the boundary of R
  double H_minus3 = 0.0;

  double delta() const { return delta_g.location.real(); }
  double lambda0() const { return delta_g.residue.real(); }
  double lambda1() const { return pole_minus1.residue.real(); }
};

inline constexpr Rect kCensusRect{-3.0, 3.0, -62.0, 62.0};
inline constexpr Rect kPairSquare{-1.963, -1.961, 11.574, 11.576};

// V is the truncation for delta, the complex pair and its square; the
// residue at -1 uses max(V, kLambda1TruncationV) and the census on R stays at V = 5.
ConstantsReport compute_constants(double V = kDefaultTruncationV);
// compute_constants() computed once per process.
const ConstantsReport& constants_report();

// key,value lines
std::string constants_text(const ConstantsReport& r);
std::string constants_json(const ConstantsReport& r, int indent = 2);

}  // namespace divmean
