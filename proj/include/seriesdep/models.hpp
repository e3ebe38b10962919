#pragma once

// The nine joint lifetime models for a two-component system and their joint
// survival functions P(X1 > x1, X2 > x2).

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "seriesdep/exception.hpp"

namespace seriesdep {

struct Independent {
  static constexpr std::string_view name = "independent";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

struct GumbelI {
  static constexpr std::string_view name = "gumbel1";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda12 = 0.0;
};

struct GumbelII {
  static constexpr std::string_view name = "gumbel2";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double alpha = 0.0;
};

struct GumbelIII {
  static constexpr std::string_view name = "gumbel3";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double m = 1.0;
};

struct Freund {
  static constexpr std::string_view name = "freund";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double theta1 = 1.0;
  double theta2 = 1.0;
};

struct MarshallOlkin {
  static constexpr std::string_view name = "marshall-olkin";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda12 = 1.0;
};

struct BlockBasu {
  static constexpr std::string_view name = "block-basu";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda12 = 0.0;
};

struct Cowan {
  static constexpr std::string_view name = "cowan";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double theta = std::numbers::pi;
};

struct Sarkar {
  static constexpr std::string_view name = "sarkar";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda12 = 1.0;
};

using ModelParams = std::variant<Independent, GumbelI, GumbelII, GumbelIII, Freund,
                                 MarshallOlkin, BlockBasu, Cowan, Sarkar>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string_view model_name(const ModelParams& p) {
  return std::visit([](const auto& v) { return std::decay_t<decltype(v)>::name; }, p);
}

inline const std::vector<std::string_view>& model_names() {
  static const std::vector<std::string_view> names = {
      Independent::name,   GumbelI::name,   GumbelII::name, GumbelIII::name, Freund::name,
      MarshallOlkin::name, BlockBasu::name, Cowan::name,    Sarkar::name};
  return names;
}

/// Rates derived from the parameters. Fields that a model does not define
/// fall back to the value that makes the identity with Independent hold
/// (lambda_star = lambda3 = lambda, alpha_star = 2 lambda).
struct DerivedRates {
  double lambda = 0.0;       // lambda1 + lambda2
  double lambda_star = 0.0;  // lambda + lambda12
  double lambda3 = 0.0;      // (lambda1^m + lambda2^m)^(1/m)
  double alpha_star = 0.0;   // lambda + sqrt(lambda1^2 + lambda2^2 - 2 lambda1 lambda2 cos theta)
};

namespace detail {

inline void require_rate(double v, std::string_view model, std::string_view field) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw DomainError(std::string(model) + " " + std::string(field) +
                      " must be a finite positive rate");
  }
}

inline void require_nonneg_rate(double v, std::string_view model, std::string_view field) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError(std::string(model) + " " + std::string(field) +
                      " must be a finite non-negative rate");
  }
}

// (a^m + b^m)^(1/m) for a, b >= 0 and m >= 1, scaled against overflow. m == 1
// is special-cased so the Independent degeneracy is bit-exact.
inline double power_mean_norm(double a, double b, double m) {
  if (m == 1.0) return a + b;
  const double big = std::max(a, b);
  if (big == 0.0) return 0.0;
  return big * std::pow(std::pow(a / big, m) + std::pow(b / big, m), 1.0 / m);
}

// sqrt(a^2 + b^2 - 2 a b cos theta) written as sqrt((a-b)^2 + 4 a b sin^2(theta/2))
// so the radicand never goes negative through cancellation.
inline double cowan_radical(double a, double b, double theta) {
  const double s = std::sin(0.5 * theta);
  const double diff = a - b;
  return std::sqrt(diff * diff + 4.0 * a * b * s * s);
}

// Keeps Freund's 1/(lambda - theta) coefficients away from the pole.
inline constexpr double kFreundPoleGuard = 1e-12;

}  // namespace detail

/// Checks every domain constraint of the variant. Returns the parameters
/// unchanged; throws DomainError naming the first violated constraint.
inline ModelParams validate(const ModelParams& params) {
  using detail::require_nonneg_rate;
  using detail::require_rate;
  std::visit(
      overloaded{
          [](const Independent& p) {
            require_rate(p.lambda1, "Independent", "lambda1");
            require_rate(p.lambda2, "Independent", "lambda2");
          },
          [](const GumbelI& p) {
            require_rate(p.lambda1, "GumbelI", "lambda1");
            require_rate(p.lambda2, "GumbelI", "lambda2");
            require_nonneg_rate(p.lambda12, "GumbelI", "lambda12");
            if (p.lambda12 > p.lambda1 * p.lambda2) {
              throw DomainError("GumbelI lambda12 exceeds lambda1*lambda2");
            }
          },
          [](const GumbelII& p) {
            require_rate(p.lambda1, "GumbelII", "lambda1");
            require_rate(p.lambda2, "GumbelII", "lambda2");
            if (!std::isfinite(p.alpha) || !(std::abs(p.alpha) < 1.0)) {
              throw DomainError("GumbelII alpha out of (-1,1)");
            }
          },
          [](const GumbelIII& p) {
            require_rate(p.lambda1, "GumbelIII", "lambda1");
            require_rate(p.lambda2, "GumbelIII", "lambda2");
            if (!std::isfinite(p.m) || !(p.m >= 1.0)) {
              throw DomainError("GumbelIII m must be >= 1");
            }
          },
          [](const Freund& p) {
            require_rate(p.lambda1, "Freund", "lambda1");
            require_rate(p.lambda2, "Freund", "lambda2");
            require_rate(p.theta1, "Freund", "theta1");
            require_rate(p.theta2, "Freund", "theta2");
            const double lambda = p.lambda1 + p.lambda2;
            const double guard = detail::kFreundPoleGuard * lambda;
            if (std::abs(lambda - p.theta1) <= guard) {
              throw DomainError("Freund theta1 must differ from lambda1+lambda2");
            }
            if (std::abs(lambda - p.theta2) <= guard) {
              throw DomainError("Freund theta2 must differ from lambda1+lambda2");
            }
          },
          [](const MarshallOlkin& p) {
            require_rate(p.lambda1, "MarshallOlkin", "lambda1");
            require_rate(p.lambda2, "MarshallOlkin", "lambda2");
            require_rate(p.lambda12, "MarshallOlkin", "lambda12");
          },
          [](const BlockBasu& p) {
            require_rate(p.lambda1, "BlockBasu", "lambda1");
            require_rate(p.lambda2, "BlockBasu", "lambda2");
            require_nonneg_rate(p.lambda12, "BlockBasu", "lambda12");
          },
          [](const Cowan& p) {
            require_rate(p.lambda1, "Cowan", "lambda1");
            require_rate(p.lambda2, "Cowan", "lambda2");
            if (!std::isfinite(p.theta) || !(p.theta > 0.0) || !(p.theta <= std::numbers::pi)) {
              throw DomainError("Cowan theta out of (0,pi]");
            }
          },
          [](const Sarkar& p) {
            require_rate(p.lambda1, "Sarkar", "lambda1");
            require_rate(p.lambda2, "Sarkar", "lambda2");
            require_rate(p.lambda12, "Sarkar", "lambda12");
          },
      },
      params);
  return params;
}

inline DerivedRates derive_rates(const ModelParams& params) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        DerivedRates r;
        r.lambda = p.lambda1 + p.lambda2;
        r.lambda_star = r.lambda;
        r.lambda3 = r.lambda;
        r.alpha_star = 2.0 * r.lambda;
        if constexpr (std::is_same_v<T, MarshallOlkin> || std::is_same_v<T, BlockBasu> ||
                      std::is_same_v<T, Sarkar> || std::is_same_v<T, GumbelI>) {
          r.lambda_star = r.lambda + p.lambda12;
        }
        if constexpr (std::is_same_v<T, GumbelIII>) {
          r.lambda3 = detail::power_mean_norm(p.lambda1, p.lambda2, p.m);
        }
        if constexpr (std::is_same_v<T, Cowan>) {
          r.alpha_star = r.lambda + detail::cowan_radical(p.lambda1, p.lambda2, p.theta);
        }
        return r;
      },
      params);
}

/// A validated model. Construction is the only validation point, so every
/// function taking a Model may assume the domain constraints hold.
class Model {
 public:
  explicit Model(const ModelParams& params) : params_(validate(params)), rates_(derive_rates(params_)) {}

  const ModelParams& params() const { return params_; }
  const DerivedRates& rates() const { return rates_; }
  std::string_view name() const { return model_name(params_); }

  double lambda1() const {
    return std::visit([](const auto& p) { return p.lambda1; }, params_);
  }
  double lambda2() const {
    return std::visit([](const auto& p) { return p.lambda2; }, params_);
  }

  /// The independence comparator: same marginal rates, no dependence.
  Model independent_counterpart() const { return Model(Independent{lambda1(), lambda2()}); }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&params_);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(params_);
  }

 private:
  ModelParams params_;
  DerivedRates rates_;
};

/// Joint survival P(X1 > x1, X2 > x2).
inline double joint_survival(const Model& model, double x1, double x2) {
  if (!(x1 >= 0.0) || !(x2 >= 0.0)) {
    throw DomainError("joint_survival: arguments must be non-negative");
  }
  const DerivedRates& dr = model.rates();
  return std::visit(
      overloaded{
          [&](const Independent& p) { return std::exp(-p.lambda1 * x1 - p.lambda2 * x2); },
          [&](const GumbelI& p) {
            return std::exp(-p.lambda1 * x1 - p.lambda2 * x2 - p.lambda12 * x1 * x2);
          },
          [&](const GumbelII& p) {
            const double u1 = -std::expm1(-p.lambda1 * x1);
            const double u2 = -std::expm1(-p.lambda2 * x2);
            return (1.0 + p.alpha * u1 * u2) * std::exp(-p.lambda1 * x1 - p.lambda2 * x2);
          },
          [&](const GumbelIII& p) {
            return std::exp(-detail::power_mean_norm(p.lambda1 * x1, p.lambda2 * x2, p.m));
          },
          [&](const Freund& p) {
            // two-term combination; rounding can lift it a few ulps above 1
            const double lambda = dr.lambda;
            if (x1 <= x2) {
              const double k = lambda - p.theta2;
              return std::min(1.0, (p.lambda1 * std::exp(-k * x1 - p.theta2 * x2) +
                                    (p.lambda2 - p.theta2) * std::exp(-lambda * x2)) /
                                       k);
            }
            const double k = lambda - p.theta1;
            return std::min(1.0, (p.lambda2 * std::exp(-k * x2 - p.theta1 * x1) +
                                  (p.lambda1 - p.theta1) * std::exp(-lambda * x1)) /
                                     k);
          },
          [&](const MarshallOlkin& p) {
            return std::exp(-p.lambda1 * x1 - p.lambda2 * x2 - p.lambda12 * std::max(x1, x2));
          },
          [&](const BlockBasu& p) {
            const double top = std::max(x1, x2);
            const double shock =
                std::exp(-p.lambda1 * x1 - p.lambda2 * x2 - p.lambda12 * top);
            return (dr.lambda_star * shock - p.lambda12 * std::exp(-dr.lambda_star * top)) /
                   dr.lambda;
          },
          [&](const Cowan& p) {
            const double a = p.lambda1 * x1;
            const double b = p.lambda2 * x2;
            return std::exp(-0.5 * (a + b + detail::cowan_radical(a, b, p.theta)));
          },
          [&](const Sarkar& p) {
            const double nu = p.lambda12 / dr.lambda;
            // Branch "0 < x2 <= x1" is written in terms of (lead, lag, rate of
            // the lagging component); the other branch swaps the roles.
            const bool second = x2 <= x1;
            const double lead = second ? x1 : x2;
            const double lag = second ? x2 : x1;
            const double lead_rate = second ? p.lambda1 : p.lambda2;
            const double lag_rate = second ? p.lambda2 : p.lambda1;
            const double prefactor = std::exp(-(lead_rate + p.lambda12) * lead);
            if (lag == 0.0) return prefactor;
            // 1 - A^(-nu) B^(1+nu) with A = 1 - e^{-r lead}, B = 1 - e^{-r lag}
            // = e^{-r lead} - A expm1((1+nu) ln(B/A)), both terms non-negative.
            const double a = -std::expm1(-lag_rate * lead);
            const double b = -std::expm1(-lag_rate * lag);
            const double q = (1.0 + nu) * (std::log(b) - std::log(a));
            const double bracket = std::exp(-lag_rate * lead) - a * std::expm1(q);
            return prefactor * bracket;
          },
      },
      model.params());
}

// ---------------------------------------------------------------------------
// Generic field access, shared by the JSON reader and command-line flags.
// ---------------------------------------------------------------------------

using FieldMap = std::map<std::string, double>;

/// Parameter field names of a model, in canonical order.
inline std::vector<std::string> model_fields(std::string_view name) {
  if (name == Independent::name) return {"lambda1", "lambda2"};
  if (name == GumbelI::name || name == MarshallOlkin::name || name == BlockBasu::name ||
      name == Sarkar::name) {
    return {"lambda1", "lambda2", "lambda12"};
  }
  if (name == GumbelII::name) return {"lambda1", "lambda2", "alpha"};
  if (name == GumbelIII::name) return {"lambda1", "lambda2", "m"};
  if (name == Freund::name) return {"lambda1", "lambda2", "theta1", "theta2"};
  if (name == Cowan::name) return {"lambda1", "lambda2", "theta"};
  throw DomainError("unknown model '" + std::string(name) + "'");
}

/// Builds parameters from a name and a field map. Every field of the model
/// must be present and no other field may be.
inline ModelParams params_from_fields(std::string_view name, const FieldMap& fields) {
  const auto expected = model_fields(name);
  for (const auto& [key, value] : fields) {
    if (std::find(expected.begin(), expected.end(), key) == expected.end()) {
      throw DomainError("field '" + key + "' does not apply to model " + std::string(name));
    }
  }
  auto get = [&](const std::string& key) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw DomainError("model " + std::string(name) + " requires field '" + key + "'");
    }
    return it->second;
  };
  const double l1 = get("lambda1");
  const double l2 = get("lambda2");
  if (name == Independent::name) return Independent{l1, l2};
  if (name == GumbelI::name) return GumbelI{l1, l2, get("lambda12")};
  if (name == GumbelII::name) return GumbelII{l1, l2, get("alpha")};
  if (name == GumbelIII::name) return GumbelIII{l1, l2, get("m")};
  if (name == Freund::name) return Freund{l1, l2, get("theta1"), get("theta2")};
  if (name == MarshallOlkin::name) return MarshallOlkin{l1, l2, get("lambda12")};
  if (name == BlockBasu::name) return BlockBasu{l1, l2, get("lambda12")};
  if (name == Cowan::name) return Cowan{l1, l2, get("theta")};
  return Sarkar{l1, l2, get("lambda12")};
}

inline FieldMap fields_of(const ModelParams& params) {
  return std::visit(
      overloaded{
          [](const Independent& p) { return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}}; },
          [](const GumbelI& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"lambda12", p.lambda12}};
          },
          [](const GumbelII& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"alpha", p.alpha}};
          },
          [](const GumbelIII& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"m", p.m}};
          },
          [](const Freund& p) {
            return FieldMap{{"lambda1", p.lambda1},
                            {"lambda2", p.lambda2},
                            {"theta1", p.theta1},
                            {"theta2", p.theta2}};
          },
          [](const MarshallOlkin& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"lambda12", p.lambda12}};
          },
          [](const BlockBasu& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"lambda12", p.lambda12}};
          },
          [](const Cowan& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"theta", p.theta}};
          },
          [](const Sarkar& p) {
            return FieldMap{{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"lambda12", p.lambda12}};
          },
      },
      params);
}

/// One parameter set per model: unit marginal rates, lambda12 = 1,
/// alpha = 0.5, m = 2, Cowan theta = pi/2.
inline std::vector<ModelParams> representative_params() {
  return {Independent{1, 1},      GumbelI{1, 1, 1},   GumbelII{1, 1, 0.5},
          GumbelIII{1, 1, 2},     Freund{1, 1, 0.5, 0.5}, MarshallOlkin{1, 1, 1},
          BlockBasu{1, 1, 1},     Cowan{1, 1, std::numbers::pi / 2}, Sarkar{1, 1, 1}};
}

}  // namespace seriesdep
