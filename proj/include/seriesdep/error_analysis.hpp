#pragma once

// Relative errors (D - I)/I of the series-system measures when a dependent
// model D is analysed as if its components were independent (I, same
// marginal rates), together with their sign structure, zero crossings and
// extrema.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seriesdep/exception.hpp"
#include "seriesdep/measures.hpp"
#include "seriesdep/models.hpp"
#include "seriesdep/numerics.hpp"

namespace seriesdep {

/// (gamma/beta) (e^{beta x} - 1)/(e^{gamma x} - 1) - 1: the reversed-hazard
/// error of an exponential series lifetime with rate gamma judged against
/// rate beta. Increasing in x when beta > gamma, decreasing when beta < gamma.
inline double rate_mismatch_rhr_error(double beta, double gamma, double x) {
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    throw DomainError("rate_mismatch_rhr_error: rates must be positive");
  }
  if (!(x > 0.0)) {
    throw DomainError("rate_mismatch_rhr_error: x must be positive");
  }
  return gamma / beta * expm1_ratio(beta * x, gamma * x) - 1.0;
}

namespace detail {

// Closed-form pieces for models whose series lifetime is exponential with
// rate c. `gap` is lambda - c, so the reliability error is expm1(gap t).
struct ConstantRateErrors {
  double rate;
  double gap;
  double hazard;
  double mrl;
};

inline std::optional<ConstantRateErrors> constant_rate_errors(const Model& model) {
  const DerivedRates& r = model.rates();
  const double lambda = r.lambda;
  auto shock = [&](double lambda12) {
    return ConstantRateErrors{r.lambda_star, -lambda12, lambda12 / lambda, -lambda12 / r.lambda_star};
  };
  return std::visit(
      overloaded{
          [&](const GumbelIII&) -> std::optional<ConstantRateErrors> {
            return ConstantRateErrors{r.lambda3, lambda - r.lambda3, (r.lambda3 - lambda) / lambda,
                                      (lambda - r.lambda3) / r.lambda3};
          },
          [&](const Cowan& p) -> std::optional<ConstantRateErrors> {
            const double gap = 0.5 * (lambda - cowan_radical(p.lambda1, p.lambda2, p.theta));
            return ConstantRateErrors{0.5 * r.alpha_star, gap, -gap / lambda, 2.0 * gap / r.alpha_star};
          },
          [&](const MarshallOlkin& p) -> std::optional<ConstantRateErrors> { return shock(p.lambda12); },
          [&](const BlockBasu& p) -> std::optional<ConstantRateErrors> { return shock(p.lambda12); },
          [&](const Sarkar& p) -> std::optional<ConstantRateErrors> { return shock(p.lambda12); },
          [&](const auto&) -> std::optional<ConstantRateErrors> { return std::nullopt; },
      },
      model.params());
}

inline double gumbel1_error(const GumbelI& p, MeasureKind kind, double t) {
  const double lambda = p.lambda1 + p.lambda2;
  switch (kind) {
    case MeasureKind::reliability: return std::expm1(-p.lambda12 * t * t);
    case MeasureKind::hazard: return 2.0 * p.lambda12 * t / lambda;
    case MeasureKind::mrl: {
      if (p.lambda12 == 0.0) return 0.0;
      const auto aux = Gumbel1Aux::at(p, t);
      return lambda * 0.5 * std::sqrt(std::numbers::pi / p.lambda12) * erfcx(aux.sqrt_delta) - 1.0;
    }
    case MeasureKind::rhr: {
      const double ratio = expm1_ratio(lambda * t, lambda * t + p.lambda12 * t * t);
      return ratio * (1.0 + 2.0 * p.lambda12 * t / lambda) - 1.0;
    }
  }
  return 0.0;
}

inline double gumbel2_error(const GumbelII& p, MeasureKind kind, double t) {
  const double lambda = p.lambda1 + p.lambda2;
  const auto aux = Gumbel2Aux::at(p, t);
  switch (kind) {
    case MeasureKind::reliability: return aux.h_minus_one;
    case MeasureKind::hazard: return -aux.h_prime / (lambda * aux.h);
    case MeasureKind::mrl: {
      // (1 + alpha - alpha lambda g)/h - 1 with the leading terms cancelled:
      // alpha [l1 e1/(l+l1) + l2 e2/(l+l2) - e1 e2 / 2] / h.
      const double e1 = std::exp(-p.lambda1 * t);
      const double e2 = std::exp(-p.lambda2 * t);
      const double numer = p.lambda1 * e1 / (lambda + p.lambda1) +
                           p.lambda2 * e2 / (lambda + p.lambda2) - 0.5 * e1 * e2;
      return p.alpha * numer / aux.h;
    }
    case MeasureKind::rhr: {
      // (e^{lt} - 1)/(e^{lt} - h) = 1/(1 - (h-1)/expm1(lt))
      const double shrink = 1.0 - aux.h_minus_one / std::expm1(lambda * t);
      return (lambda * aux.h - aux.h_prime) / (lambda * shrink) - 1.0;
    }
  }
  return 0.0;
}

}  // namespace detail

/// Relative error (measure_D - measure_I)/measure_I at time t.
inline double relative_error(const Model& model, MeasureKind kind, double t) {
  if (kind == MeasureKind::rhr) {
    detail::require_rhr_time(t, "relative_error");
  } else {
    detail::require_time(t, "relative_error");
  }
  if (model.is<Independent>() || model.is<Freund>()) return 0.0;
  if (const auto* p = model.get_if<GumbelI>()) return detail::gumbel1_error(*p, kind, t);
  if (const auto* p = model.get_if<GumbelII>()) return detail::gumbel2_error(*p, kind, t);

  const auto c = *detail::constant_rate_errors(model);
  switch (kind) {
    case MeasureKind::reliability: return std::expm1(c.gap * t);
    case MeasureKind::hazard: return c.hazard;
    case MeasureKind::mrl: return c.mrl;
    case MeasureKind::rhr: return rate_mismatch_rhr_error(model.rates().lambda, c.rate, t);
  }
  return 0.0;
}

/// Limit of the relative error as t -> infinity; empty when it diverges.
inline std::optional<double> asymptote(const Model& model, MeasureKind kind) {
  if (model.is<Independent>() || model.is<Freund>()) return 0.0;
  if (const auto* p = model.get_if<GumbelI>()) {
    if (p->lambda12 == 0.0) return 0.0;
    if (kind == MeasureKind::hazard) return std::nullopt;
    return -1.0;
  }
  if (const auto* p = model.get_if<GumbelII>()) {
    if (kind == MeasureKind::reliability || kind == MeasureKind::rhr) return p->alpha;
    return 0.0;
  }
  const auto c = *detail::constant_rate_errors(model);
  switch (kind) {
    case MeasureKind::hazard: return c.hazard;
    case MeasureKind::mrl: return c.mrl;
    case MeasureKind::reliability:
    case MeasureKind::rhr:
      if (c.gap > 0.0) return std::nullopt;
      if (c.gap < 0.0) return -1.0;
      return 0.0;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sign classification
// ---------------------------------------------------------------------------

/// How the independence assumption assesses a measure. A negative relative
/// error means the independent model reports a larger value than the true
/// dependent model: over-assessment. Positive means under-assessment. The
/// convention is the same for all four measures.
enum class Assessment { over, under, exact };

inline Assessment assessment_for(double relative_err) {
  if (relative_err < 0.0) return Assessment::over;
  if (relative_err > 0.0) return Assessment::under;
  return Assessment::exact;
}

inline std::string_view to_string(Assessment a) {
  switch (a) {
    case Assessment::over: return "OA";
    case Assessment::under: return "UA";
    case Assessment::exact: return "0";
  }
  return "?";
}

struct SignVerdict {
  enum class Kind { always_oa, always_ua, zero, switch_ua_to_oa, switch_oa_to_ua, param_dependent };

  Kind kind = Kind::zero;
  std::optional<double> threshold;

  bool operator==(const SignVerdict&) const = default;

  static SignVerdict always_oa() { return {Kind::always_oa, std::nullopt}; }
  static SignVerdict always_ua() { return {Kind::always_ua, std::nullopt}; }
  static SignVerdict zero() { return {Kind::zero, std::nullopt}; }
  static SignVerdict param_dependent() { return {Kind::param_dependent, std::nullopt}; }
  static SignVerdict ua_to_oa(double t) { return {Kind::switch_ua_to_oa, t}; }
  static SignVerdict oa_to_ua(double t) { return {Kind::switch_oa_to_ua, t}; }

  std::string label() const {
    auto fmt = [](double t) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g", t);
      return std::string(buf);
    };
    switch (kind) {
      case Kind::always_oa: return "OA";
      case Kind::always_ua: return "UA";
      case Kind::zero: return "0";
      case Kind::param_dependent: return "param-dependent";
      case Kind::switch_ua_to_oa: return "UA if t<" + fmt(*threshold) + "; OA if t>" + fmt(*threshold);
      case Kind::switch_oa_to_ua: return "OA if t<" + fmt(*threshold) + "; UA if t>" + fmt(*threshold);
    }
    return "?";
  }
};

inline std::string_view to_string(SignVerdict::Kind kind) {
  switch (kind) {
    case SignVerdict::Kind::always_oa: return "always_oa";
    case SignVerdict::Kind::always_ua: return "always_ua";
    case SignVerdict::Kind::zero: return "zero";
    case SignVerdict::Kind::switch_ua_to_oa: return "switch_ua_to_oa";
    case SignVerdict::Kind::switch_oa_to_ua: return "switch_oa_to_ua";
    case SignVerdict::Kind::param_dependent: return "param_dependent";
  }
  return "?";
}

/// Root of the relative-error curve inside `bracket`.
inline CrossingReport find_crossing(const Model& model, MeasureKind kind, Bracket bracket,
                                    SolverConfig cfg = SolverConfig::for_roots()) {
  auto f = [&](double t) { return relative_error(model, kind, t); };
  try {
    return bracketed_root(f, bracket.lo, bracket.hi, cfg);
  } catch (const BracketError&) {
    throw BracketError("find_crossing: " + std::string(to_string(kind)) + " error of " +
                       std::string(model.name()) + " has no sign change on the bracket");
  }
}

inline constexpr double kDefaultBracketStart = 1e-6;
inline constexpr int kMaxBracketExpansions = 60;

/// Root of the relative-error curve, searching (1e-6, 10/lambda) and doubling
/// the upper end until the sign changes.
inline CrossingReport find_crossing(const Model& model, MeasureKind kind) {
  const double lo = kDefaultBracketStart;
  const double f_lo = relative_error(model, kind, lo);
  double hi = 10.0 / model.rates().lambda;
  for (int i = 0; i <= kMaxBracketExpansions; ++i, hi *= 2.0) {
    const double f_hi = relative_error(model, kind, hi);
    if (f_lo != 0.0 && f_hi != 0.0 && (f_lo > 0.0) != (f_hi > 0.0)) {
      return find_crossing(model, kind, Bracket{lo, hi});
    }
  }
  throw BracketError("find_crossing: " + std::string(to_string(kind)) + " error of " +
                     std::string(model.name()) + " does not change sign");
}

enum class ExtremumKind { automatic, minimum, maximum };

/// Interior extremum of the relative-error curve on `bracket`. The curve is
/// sampled to pick the extremum and its neighbourhood, which is then refined
/// by golden-section search. A monotone curve yields its end point with
/// at_boundary set; a constant one throws FlatError.
inline CrossingReport find_extremum(const Model& model, MeasureKind kind, Bracket bracket,
                                    ExtremumKind which = ExtremumKind::automatic,
                                    SolverConfig cfg = SolverConfig::for_extrema()) {
  validate(cfg);
  if (!(bracket.lo < bracket.hi)) {
    throw DomainError("find_extremum: bracket must satisfy lo < hi");
  }
  auto f = [&](double t) { return relative_error(model, kind, t); };
  constexpr std::size_t n = 201;
  std::vector<double> ts(n);
  std::vector<double> vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = bracket.lo + (bracket.hi - bracket.lo) * static_cast<double>(i) / (n - 1);
    vs[i] = f(ts[i]);
  }
  const auto [min_it, max_it] = std::minmax_element(vs.begin(), vs.end());
  const double scale = std::max({1.0, std::abs(*min_it), std::abs(*max_it)});
  if (*max_it - *min_it <= 1e-14 * scale) {
    throw FlatError("find_extremum: " + std::string(to_string(kind)) + " error of " +
                    std::string(model.name()) + " is constant on the bracket");
  }
  const auto i_min = static_cast<std::size_t>(min_it - vs.begin());
  const auto i_max = static_cast<std::size_t>(max_it - vs.begin());
  auto interior = [&](std::size_t i) { return i > 0 && i + 1 < n; };
  const double ends_hi = std::max(vs.front(), vs.back());
  const double ends_lo = std::min(vs.front(), vs.back());

  bool maximize;
  std::size_t idx;
  switch (which) {
    case ExtremumKind::maximum: maximize = true; idx = i_max; break;
    case ExtremumKind::minimum: maximize = false; idx = i_min; break;
    case ExtremumKind::automatic:
    default:
      if (interior(i_max) && interior(i_min)) {
        maximize = (vs[i_max] - ends_hi) >= (ends_lo - vs[i_min]);
      } else if (interior(i_max)) {
        maximize = true;
      } else if (interior(i_min)) {
        maximize = false;
      } else {
        maximize = std::abs(vs[i_max]) >= std::abs(vs[i_min]);
      }
      idx = maximize ? i_max : i_min;
      break;
  }
  if (!interior(idx)) {
    return {ts[idx], vs[idx], bracket, 0, 0.0, true};
  }
  const double sign = maximize ? -1.0 : 1.0;
  const ScalarMinimum m =
      minimize_scalar([&](double t) { return sign * f(t); }, ts[idx - 1], ts[idx + 1], cfg);
  const double h = default_step(m.t);
  const double slope_residual = std::abs(f(m.t + h) - f(m.t - h)) / 2.0;
  return {m.t, sign * m.value, {ts[idx - 1], ts[idx + 1]}, m.iterations, slope_residual,
          m.at_boundary};
}

/// Extremum search on the default window (1e-6, 10/lambda).
inline CrossingReport find_extremum(const Model& model, MeasureKind kind,
                                    ExtremumKind which = ExtremumKind::automatic,
                                    SolverConfig cfg = SolverConfig::for_extrema()) {
  return find_extremum(model, kind, {kDefaultBracketStart, 10.0 / model.rates().lambda}, which, cfg);
}

/// Errors at or below this magnitude are treated as zero when reading signs.
inline constexpr double kSignNoiseFloor = 1e-12;

/// Over/under-assessment verdict for one model and measure. The curve is
/// scanned on a geometric grid over (1e-4, 60)/lambda; a single sign change
/// is located with find_crossing and becomes the threshold.
inline SignVerdict classify_sign(const Model& model, MeasureKind kind) {
  if (const auto* p = model.get_if<GumbelII>(); p && kind == MeasureKind::reliability) {
    // alpha (1 - e^{-l1 t})(1 - e^{-l2 t}) carries the sign of alpha.
    return p->alpha == 0.0 ? SignVerdict::zero() : SignVerdict::param_dependent();
  }
  const double lambda = model.rates().lambda;
  const double t_lo = 1e-4 / lambda;
  const double t_hi = 60.0 / lambda;
  constexpr int n = 800;
  const double ratio = std::pow(t_hi / t_lo, 1.0 / (n - 1));

  int sign_changes = 0;
  int last_sign = 0;
  double last_t = 0.0;
  double switch_lo = 0.0;
  double switch_hi = 0.0;
  int first_sign = 0;
  double t = t_lo;
  for (int i = 0; i < n; ++i, t *= ratio) {
    const double err = relative_error(model, kind, t);
    if (std::abs(err) <= kSignNoiseFloor) continue;
    const int s = err > 0.0 ? 1 : -1;
    if (last_sign == 0) {
      first_sign = s;
    } else if (s != last_sign) {
      ++sign_changes;
      switch_lo = last_t;
      switch_hi = t;
    }
    last_sign = s;
    last_t = t;
  }
  if (last_sign == 0) return SignVerdict::zero();
  if (sign_changes == 0) {
    return first_sign < 0 ? SignVerdict::always_oa() : SignVerdict::always_ua();
  }
  if (sign_changes > 1) {
    // More than one switch cannot be summarised by a single threshold.
    return SignVerdict::param_dependent();
  }
  const double root = find_crossing(model, kind, {switch_lo, switch_hi}).t_root;
  return first_sign > 0 ? SignVerdict::ua_to_oa(root) : SignVerdict::oa_to_ua(root);
}

// ---------------------------------------------------------------------------
// Sampled curves
// ---------------------------------------------------------------------------

struct RelativeErrorCurve {
  struct Sample {
    double t;
    double err;
  };

  ModelParams model;
  MeasureKind kind = MeasureKind::reliability;
  std::vector<Sample> samples;
  std::optional<double> asymptote;
};

inline RelativeErrorCurve sample_error_curve(const Model& model, MeasureKind kind,
                                             std::span<const double> times) {
  RelativeErrorCurve curve{model.params(), kind, {}, asymptote(model, kind)};
  curve.samples.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("sample_error_curve: times must be strictly increasing");
    }
    const double err = relative_error(model, kind, times[i]);
    if (!std::isfinite(err)) {
      throw DomainError("sample_error_curve: relative error is not finite at t=" +
                        std::to_string(times[i]));
    }
    curve.samples.push_back({times[i], err});
  }
  return curve;
}

}  // namespace seriesdep
