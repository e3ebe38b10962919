#pragma once

// Dependency-free numerical kernel: Gaussian tail functions, semi-infinite
// quadrature, finite differences, bracketed root finding and golden-section
// minimization. Everything here is a pure function of its arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "seriesdep/exception.hpp"

namespace seriesdep {

struct SolverConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_iter = 200;

  /// Defaults for root finding: 1e-10 absolute in the abscissa.
  static constexpr SolverConfig for_roots() { return {1e-10, 1e-12, 200}; }
  /// Defaults for golden-section searches: 1e-8 absolute in the abscissa.
  static constexpr SolverConfig for_extrema() { return {1e-8, 1e-12, 200}; }
  /// Defaults for quadrature; max_iter is the subdivision budget.
  static constexpr SolverConfig for_quadrature() {
    return {std::numeric_limits<double>::min(), 1e-12, 4000};
  }
};

inline void validate(const SolverConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
    throw DomainError("SolverConfig tolerances must be positive");
  }
  if (cfg.max_iter < 1) {
    throw DomainError("SolverConfig max_iter must be at least 1");
  }
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Result of a root or extremum search on a scalar curve.
struct CrossingReport {
  double t_root = 0.0;
  double value_at_root = 0.0;
  Bracket bracket;
  int iterations = 0;
  double residual = 0.0;
  /// Set when an extremum search collapsed onto an end of the bracket.
  bool at_boundary = false;
};

struct ScalarMinimum {
  double t = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool at_boundary = false;
};

/// `steps` evenly spaced points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2 || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("linspace: need lo < hi and at least two steps");
  }
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  }
  out.back() = hi;
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian tail functions
// ---------------------------------------------------------------------------

/// Standard normal CDF, evaluated as erfc(-z/sqrt(2))/2 so the lower tail
/// keeps full relative accuracy until it underflows.
inline double std_normal_cdf(double z) {
  if (!std::isfinite(z)) {
    throw DomainError("std_normal_cdf: argument must be finite");
  }
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Scaled complementary error function exp(z^2) erfc(z) for z >= 0.
inline double erfcx(double z) {
  if (std::isnan(z) || z < 0.0) {
    throw DomainError("erfcx: argument must be non-negative");
  }
  if (std::isinf(z)) return 0.0;
  if (z <= 4.0) {
    return std::exp(z * z) * std::erfc(z);
  }
  // Laplace continued fraction
  //   z + (1/2)/(z + 1/(z + (3/2)/(z + 2/(z + ...))))
  // evaluated with the modified Lentz algorithm.
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double value = z;
  double c = value;
  double d = 0.0;
  for (int n = 1; n < 10000; ++n) {
    const double a = 0.5 * n;
    d = z + a * d;
    if (d == 0.0) d = tiny;
    c = z + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    value *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * value);
}

/// expm1(a)/expm1(b) for a, b >= 0, b > 0, without overflow for large
/// arguments.
inline double expm1_ratio(double a, double b) {
  if (!(b > 0.0) || a < 0.0) {
    throw DomainError("expm1_ratio: requires a >= 0 and b > 0");
  }
  if (std::max(a, b) < 50.0) {
    return std::expm1(a) / std::expm1(b);
  }
  return std::exp(a - b) * (-std::expm1(-a)) / (-std::expm1(-b));
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace detail {

struct PanelEstimate {
  double lo;
  double hi;
  double value;
  double error;
};

// 15-point Kronrod rule with its embedded 7-point Gauss rule; error estimate
// follows QUADPACK's qk15.
template <class F>
PanelEstimate gauss_kronrod15(const F& f, double lo, double hi) {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = f(center);

  double res_gauss = f_center * wg[3];
  double res_kronrod = f_center * wgk[7];
  double res_abs = std::abs(res_kronrod);
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    f_left[j] = f(center - dx);
    f_right[j] = f(center + dx);
    const double sum = f_left[j] + f_right[j];
    res_kronrod += wgk[j] * sum;
    res_abs += wgk[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) res_gauss += wg[j / 2] * sum;
  }
  const double mean = 0.5 * res_kronrod;
  double res_asc = wgk[7] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    res_asc += wgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  const double value = res_kronrod * half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double error = std::abs((res_kronrod - res_gauss) * half);
  if (res_asc != 0.0 && error != 0.0) {
    error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * res_abs, error);
  }
  return {lo, hi, value, error};
}

// Globally adaptive integration over [lo, hi]: repeatedly bisects the
// segment with the largest error estimate. `budget` counts bisections and is
// shared across calls.
template <class F>
double integrate_adaptive(const F& f, double lo, double hi, double rel_tol,
                          double abs_tol, int& budget) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double rel = std::max(rel_tol, 50.0 * eps);
  std::vector<PanelEstimate> segments{gauss_kronrod15(f, lo, hi)};
  for (;;) {
    double total = 0.0;
    double total_error = 0.0;
    for (const auto& s : segments) {
      total += s.value;
      total_error += s.error;
    }
    if (total_error <= std::max(abs_tol, rel * std::abs(total))) return total;
    if (budget <= 0) {
      throw ConvergenceError("integrate: subdivision budget exhausted");
    }
    --budget;
    auto worst = std::max_element(
        segments.begin(), segments.end(),
        [](const PanelEstimate& a, const PanelEstimate& b) { return a.error < b.error; });
    const double mid = 0.5 * (worst->lo + worst->hi);
    if (!(mid > worst->lo && mid < worst->hi)) {
      throw ConvergenceError("integrate: segment too small to bisect");
    }
    const PanelEstimate left = gauss_kronrod15(f, worst->lo, mid);
    const PanelEstimate right = gauss_kronrod15(f, mid, worst->hi);
    *worst = left;
    segments.push_back(right);
  }
}

}  // namespace detail

/// Integral of f over [a, inf) for a positive, eventually exponentially
/// decaying integrand. Panels of doubling width are integrated adaptively
/// until a panel contributes less than 1e-16 of the running sum.
template <class F>
double integrate_semi_infinite(const F& f, double a, SolverConfig cfg = SolverConfig::for_quadrature(),
                               double initial_width = 1.0) {
  validate(cfg);
  if (!std::isfinite(a)) {
    throw DomainError("integrate_semi_infinite: lower limit must be finite");
  }
  if (!(initial_width > 0.0)) {
    throw DomainError("integrate_semi_infinite: initial width must be positive");
  }
  constexpr int max_panels = 64;
  int budget = cfg.max_iter;
  double sum = 0.0;
  double lo = a;
  double width = initial_width;
  for (int panel = 0; panel < max_panels; ++panel) {
    const double hi = lo + width;
    const double abs_tol = std::max(cfg.abs_tol, 0.5 * cfg.rel_tol * std::abs(sum));
    const double part = detail::integrate_adaptive(f, lo, hi, cfg.rel_tol, abs_tol, budget);
    sum += part;
    if (panel >= 1 && std::abs(part) <= 1e-16 * std::abs(sum)) return sum;
    lo = hi;
    width *= 2.0;
  }
  throw ConvergenceError("integrate_semi_infinite: integrand tail does not decay");
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

/// Default central-difference step: max(1e-6, 1e-6 |t|).
inline double default_step(double t) { return std::max(1e-6, 1e-6 * std::abs(t)); }

/// Central difference (f(t+h) - f(t-h)) / 2h. A non-positive `h` selects
/// default_step(t). Throws DomainError if t - h falls below `lower`.
template <class F>
double central_derivative(const F& f, double t, double h = 0.0,
                          double lower = -std::numeric_limits<double>::infinity()) {
  if (!(h > 0.0)) h = default_step(t);
  // Use the step actually representable around t.
  const double up = t + h;
  const double down = t - h;
  if (down < lower) {
    throw DomainError("central_derivative: step leaves the domain");
  }
  return (f(up) - f(down)) / (up - down);
}

// ---------------------------------------------------------------------------
// Root finding and minimization
// ---------------------------------------------------------------------------

/// Brent's method: bisection safeguarding inverse quadratic and secant steps.
/// The root is located to cfg.abs_tol in the abscissa.
template <class F>
CrossingReport bracketed_root(const F& f, double a, double b,
                              SolverConfig cfg = SolverConfig::for_roots()) {
  validate(cfg);
  if (!(a < b)) std::swap(a, b);
  double fa = f(a);
  double fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) {
    throw DomainError("bracketed_root: function is NaN at the bracket");
  }
  if (fa == 0.0) return {a, fa, {a, a}, 0, 0.0, false};
  if (fb == 0.0) return {b, fb, {b, b}, 0, 0.0, false};
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("bracketed_root: no sign change on [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * cfg.abs_tol;
    const double half = 0.5 * (c - b);
    if (std::abs(half) <= tol || fb == 0.0) {
      return {b, fb, {std::min(b, c), std::max(b, c)}, iter, std::abs(fb), false};
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * half * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double bound1 = 3.0 * half * q - std::abs(tol * q);
      const double bound2 = std::abs(e * q);
      if (2.0 * p < std::min(bound1, bound2)) {
        e = d;
        d = p / q;
      } else {
        d = half;
        e = d;
      }
    } else {
      d = half;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : std::copysign(tol, half);
    fb = f(b);
  }
  throw ConvergenceError("bracketed_root: iteration budget exhausted");
}

/// Golden-section search for the minimum of a unimodal f on [a, b]. The
/// interval is reduced below cfg.abs_tol; a result within that distance of
/// an end point is snapped onto it and flagged.
template <class F>
ScalarMinimum minimize_scalar(const F& f, double a, double b,
                              SolverConfig cfg = SolverConfig::for_extrema()) {
  validate(cfg);
  if (!(a < b)) std::swap(a, b);
  const double a0 = a;
  const double b0 = b;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iter = 0;
  while (b - a > cfg.abs_tol) {
    if (++iter > cfg.max_iter) {
      throw ConvergenceError("minimize_scalar: iteration budget exhausted");
    }
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  if (t - a0 <= cfg.abs_tol) return {a0, f(a0), iter, true};
  if (b0 - t <= cfg.abs_tol) return {b0, f(b0), iter, true};
  return {t, f(t), iter, false};
}

}  // namespace seriesdep
