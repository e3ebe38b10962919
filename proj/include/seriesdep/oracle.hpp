#pragma once

// Independent routes to the series-system measures: quadrature of the
// survival curve for the mean residual life, finite differences for the
// density, and the joint survival surface on its diagonal. None of these
// touch the closed forms they are compared against.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "seriesdep/exception.hpp"
#include "seriesdep/measures.hpp"
#include "seriesdep/models.hpp"
#include "seriesdep/numerics.hpp"

namespace seriesdep {

/// e(t) = int_t^inf S(x) dx / S(t) by adaptive quadrature.
inline double mrl_oracle(const Model& model, double t,
                         SolverConfig cfg = SolverConfig::for_quadrature()) {
  detail::require_time(t, "mrl_oracle");
  const double s_t = series_survival(model, t);
  if (!(s_t > 0.0)) {
    throw DomainError("mrl_oracle: survival underflows at t");
  }
  const double width = 1.0 / series_hazard(model, t);
  const double tail = integrate_semi_infinite(
      [&](double x) { return series_survival(model, x); }, t, cfg, width);
  return tail / s_t;
}

namespace detail {

// f(t) = -dS/dt by central differences, never stepping below zero.
inline double density_by_differences(const Model& model, double t) {
  if (!(t > 0.0)) {
    throw DomainError("density oracle requires t > 0");
  }
  return -central_derivative([&](double x) { return series_survival(model, x); }, t, 0.0, 0.0);
}

}  // namespace detail

/// r(t) = f(t)/S(t) with f from central differences of S.
inline double hazard_oracle(const Model& model, double t) {
  const double f = detail::density_by_differences(model, t);
  return f / series_survival(model, t);
}

/// mu(t) = f(t)/F(t) with f from central differences of S.
inline double rhr_oracle(const Model& model, double t) {
  const double f = detail::density_by_differences(model, t);
  const double cdf = 1.0 - series_survival(model, t);
  if (cdf < 1e-14) {
    throw DomainError("rhr_oracle: distribution function too small at t");
  }
  return f / cdf;
}

struct OracleReport {
  ModelParams model;
  MeasureKind kind = MeasureKind::reliability;
  std::vector<double> grid;
  double max_rel_dev = 0.0;
  double worst_t = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_rel_dev <= tolerance; }
};

/// Agreement tolerance of each oracle route. Reliability stands for the
/// diagonal identity S_T(t) = S(t, t).
inline double oracle_tolerance(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::reliability: return 1e-12;
    case MeasureKind::hazard: return 1e-6;
    case MeasureKind::mrl: return 1e-8;
    case MeasureKind::rhr: return 1e-6;
  }
  return 0.0;
}

namespace detail {

template <class Closed, class Oracle>
OracleReport compare_over_grid(const Model& model, MeasureKind kind, std::span<const double> grid,
                               Closed closed, Oracle oracle) {
  if (grid.empty()) {
    throw DomainError("oracle grid must not be empty");
  }
  OracleReport report{model.params(), kind, {grid.begin(), grid.end()}, 0.0, grid.front(),
                      oracle_tolerance(kind)};
  for (double t : grid) {
    const double expected = closed(t);
    const double got = oracle(t);
    const double dev = std::abs(got - expected) / std::abs(expected);
    // NaN deviations must register as failures.
    if (!(dev <= report.max_rel_dev)) {
      report.max_rel_dev = std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev;
      report.worst_t = t;
    }
  }
  return report;
}

}  // namespace detail

/// Largest relative deviation between S(t, t) and the closed-form S_T(t).
inline OracleReport diagonal_consistency(const Model& model, std::span<const double> grid) {
  return detail::compare_over_grid(
      model, MeasureKind::reliability, grid, [&](double t) { return series_survival(model, t); },
      [&](double t) { return joint_survival(model, t, t); });
}

/// Compares one closed-form measure against its oracle over a grid.
inline OracleReport check_against_oracle(const Model& model, MeasureKind kind,
                                         std::span<const double> grid) {
  switch (kind) {
    case MeasureKind::reliability: return diagonal_consistency(model, grid);
    case MeasureKind::hazard:
      return detail::compare_over_grid(
          model, kind, grid, [&](double t) { return series_hazard(model, t); },
          [&](double t) { return hazard_oracle(model, t); });
    case MeasureKind::mrl:
      return detail::compare_over_grid(
          model, kind, grid, [&](double t) { return series_mrl(model, t); },
          [&](double t) { return mrl_oracle(model, t); });
    case MeasureKind::rhr:
      return detail::compare_over_grid(
          model, kind, grid, [&](double t) { return series_rhr(model, t); },
          [&](double t) { return rhr_oracle(model, t); });
  }
  throw DomainError("check_against_oracle: unknown measure");
}

}  // namespace seriesdep
