#pragma once

// Closed-form reliability measures of the series system T = min(X1, X2),
// whose survival function is the joint survival on the diagonal.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "seriesdep/exception.hpp"
#include "seriesdep/models.hpp"
#include "seriesdep/numerics.hpp"

namespace seriesdep {

enum class MeasureKind { reliability, hazard, mrl, rhr };

inline constexpr std::array<MeasureKind, 4> kAllMeasures = {
    MeasureKind::reliability, MeasureKind::hazard, MeasureKind::mrl, MeasureKind::rhr};

inline std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::reliability: return "reliability";
    case MeasureKind::hazard: return "hazard";
    case MeasureKind::mrl: return "mrl";
    case MeasureKind::rhr: return "rhr";
  }
  return "?";
}

inline MeasureKind parse_measure_kind(std::string_view text) {
  for (MeasureKind k : kAllMeasures) {
    if (to_string(k) == text) return k;
  }
  throw DomainError("unknown measure '" + std::string(text) +
                    "' (expected reliability, hazard, mrl or rhr)");
}

/// The reversed hazard rate diverges like 1/t at the origin; it is only
/// evaluated from here on.
inline constexpr double kRhrMinTime = 1e-12;

/// delta(t) = lambda12 (t + lambda / (2 lambda12))^2 for the Gumbel I model.
struct Gumbel1Aux {
  double delta = 0.0;
  double sqrt_delta = 0.0;

  static Gumbel1Aux at(const GumbelI& p, double t) {
    if (!(p.lambda12 > 0.0)) {
      throw DomainError("Gumbel1Aux requires lambda12 > 0");
    }
    const double lambda = p.lambda1 + p.lambda2;
    const double root = std::sqrt(p.lambda12) * t + lambda / (2.0 * std::sqrt(p.lambda12));
    return {root * root, root};
  }
};

/// Gumbel II auxiliaries:
///   h(t)  = 1 + alpha (1 - e^{-l1 t})(1 - e^{-l2 t}),
///   h'(t) = alpha [l1 e^{-l1 t}(1 - e^{-l2 t}) + l2 e^{-l2 t}(1 - e^{-l1 t})],
///   g(t)  = e^{-l1 t}/(l + l1) + e^{-l2 t}/(l + l2) - e^{-l t}/(2 l).
struct Gumbel2Aux {
  double h = 1.0;
  double h_minus_one = 0.0;  // alpha (1 - e^{-l1 t})(1 - e^{-l2 t}), without cancellation
  double h_prime = 0.0;
  double g = 0.0;

  static Gumbel2Aux at(const GumbelII& p, double t) {
    const double lambda = p.lambda1 + p.lambda2;
    const double e1 = std::exp(-p.lambda1 * t);
    const double e2 = std::exp(-p.lambda2 * t);
    const double u1 = -std::expm1(-p.lambda1 * t);
    const double u2 = -std::expm1(-p.lambda2 * t);
    Gumbel2Aux aux;
    aux.h_minus_one = p.alpha * u1 * u2;
    aux.h = 1.0 + aux.h_minus_one;
    aux.h_prime = p.alpha * (p.lambda1 * e1 * u2 + p.lambda2 * e2 * u1);
    aux.g = e1 / (lambda + p.lambda1) + e2 / (lambda + p.lambda2) - e1 * e2 / (2.0 * lambda);
    return aux;
  }
};

namespace detail {

inline void require_time(double t, std::string_view what) {
  if (!(t >= 0.0) || std::isinf(t)) {
    throw DomainError(std::string(what) + ": time must be finite and non-negative");
  }
}

inline void require_rhr_time(double t, std::string_view what) {
  if (!(t >= kRhrMinTime) || std::isinf(t)) {
    throw DomainError(std::string(what) + ": reversed hazard rate needs t >= 1e-12");
  }
}

}  // namespace detail

/// The constant hazard rate for the models whose series lifetime is
/// exponential, empty for Gumbel I and Gumbel II.
inline std::optional<double> constant_hazard(const Model& model) {
  const DerivedRates& r = model.rates();
  return std::visit(
      overloaded{
          [&](const Independent&) -> std::optional<double> { return r.lambda; },
          [&](const Freund&) -> std::optional<double> { return r.lambda; },
          [&](const GumbelI&) -> std::optional<double> { return std::nullopt; },
          [&](const GumbelII&) -> std::optional<double> { return std::nullopt; },
          [&](const GumbelIII&) -> std::optional<double> { return r.lambda3; },
          [&](const MarshallOlkin&) -> std::optional<double> { return r.lambda_star; },
          [&](const BlockBasu&) -> std::optional<double> { return r.lambda_star; },
          [&](const Sarkar&) -> std::optional<double> { return r.lambda_star; },
          [&](const Cowan&) -> std::optional<double> { return 0.5 * r.alpha_star; },
      },
      model.params());
}

inline double series_survival(const Model& model, double t) {
  detail::require_time(t, "series_survival");
  if (auto c = constant_hazard(model)) return std::exp(-*c * t);
  const double lambda = model.rates().lambda;
  if (const auto* p = model.get_if<GumbelI>()) {
    return std::exp(-lambda * t - p->lambda12 * t * t);
  }
  const auto& p = *model.get_if<GumbelII>();
  return std::exp(-lambda * t) * Gumbel2Aux::at(p, t).h;
}

inline double series_hazard(const Model& model, double t) {
  detail::require_time(t, "series_hazard");
  if (auto c = constant_hazard(model)) return *c;
  const double lambda = model.rates().lambda;
  if (const auto* p = model.get_if<GumbelI>()) {
    return lambda + 2.0 * p->lambda12 * t;
  }
  const auto aux = Gumbel2Aux::at(*model.get_if<GumbelII>(), t);
  return lambda - aux.h_prime / aux.h;
}

/// Mean residual life. Gumbel I uses
///   e(t) = sqrt(pi/lambda12) e^{delta} (1 - Phi(sqrt(2 delta)))
///        = (1/2) sqrt(pi/lambda12) erfcx(sqrt(delta)),
/// which stays finite where e^{delta} overflows.
inline double series_mrl(const Model& model, double t) {
  detail::require_time(t, "series_mrl");
  if (auto c = constant_hazard(model)) return 1.0 / *c;
  const double lambda = model.rates().lambda;
  if (const auto* p = model.get_if<GumbelI>()) {
    if (p->lambda12 == 0.0) return 1.0 / lambda;
    const auto aux = Gumbel1Aux::at(*p, t);
    return 0.5 * std::sqrt(std::numbers::pi / p->lambda12) * erfcx(aux.sqrt_delta);
  }
  const auto& p = *model.get_if<GumbelII>();
  const auto aux = Gumbel2Aux::at(p, t);
  return ((1.0 + p.alpha) / lambda - p.alpha * aux.g) / aux.h;
}

/// Reversed hazard rate f(t)/F(t), defined for t >= kRhrMinTime.
inline double series_rhr(const Model& model, double t) {
  detail::require_rhr_time(t, "series_rhr");
  if (auto c = constant_hazard(model)) return *c / std::expm1(*c * t);
  const double lambda = model.rates().lambda;
  if (const auto* p = model.get_if<GumbelI>()) {
    const double exponent = lambda * t + p->lambda12 * t * t;
    return (lambda + 2.0 * p->lambda12 * t) / std::expm1(exponent);
  }
  const auto aux = Gumbel2Aux::at(*model.get_if<GumbelII>(), t);
  // e^{lt} - h = expm1(lt) - (h - 1)
  return (lambda * aux.h - aux.h_prime) / (std::expm1(lambda * t) - aux.h_minus_one);
}

inline double series_measure(const Model& model, MeasureKind kind, double t) {
  switch (kind) {
    case MeasureKind::reliability: return series_survival(model, t);
    case MeasureKind::hazard: return series_hazard(model, t);
    case MeasureKind::mrl: return series_mrl(model, t);
    case MeasureKind::rhr: return series_rhr(model, t);
  }
  throw DomainError("series_measure: unknown measure");
}

}  // namespace seriesdep
