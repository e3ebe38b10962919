// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "random_models.hpp"
#include "seriesdep/seriesdep.hpp"

namespace sd = seriesdep;
using sd::MeasureKind;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "\n    - " << what;
    }
  }
};

bool within(double got, double want, double tol) { return std::abs(got - want) <= tol; }

std::string show(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

void regression_gumbel1(Outcome& o) {
  const sd::Model m(sd::GumbelI{1, 1, 1});
  const auto root = sd::find_crossing(m, MeasureKind::rhr);
  o.check(within(root.t_root, 0.577, 0.002), "rhr crossing " + show(root.t_root));
  o.check(root.iterations <= 200, "root iterations " + std::to_string(root.iterations));
  const auto mode = sd::find_extremum(m, MeasureKind::rhr);
  o.check(within(mode.t_root, 0.2917, 0.002), "rhr mode at " + show(mode.t_root));
  o.check(within(mode.value_at_root, 0.0756, 0.0015), "rhr mode value " + show(mode.value_at_root));
}

void regression_gumbel2(Outcome& o) {
  const sd::Model m(sd::GumbelII{1, 1, 0.5});
  const auto hz = sd::find_extremum(m, MeasureKind::hazard, sd::ExtremumKind::minimum);
  o.check(within(hz.t_root, -std::log(3 - std::sqrt(6.0)), 1e-6), "hazard minimum at " + show(hz.t_root));
  o.check(within(hz.value_at_root, -0.1124, 0.0005), "hazard minimum value " + show(hz.value_at_root));
  const auto root = sd::find_crossing(m, MeasureKind::rhr);
  o.check(within(root.t_root, 0.481, 0.002), "rhr crossing " + show(root.t_root));
  o.check(root.iterations <= 200, "root iterations " + std::to_string(root.iterations));
  const auto rmin = sd::find_extremum(m, MeasureKind::rhr, sd::ExtremumKind::minimum);
  o.check(within(rmin.t_root, 0.2178, 0.002), "rhr minimum at " + show(rmin.t_root));
  o.check(within(rmin.value_at_root, -0.0254, 0.001), "rhr minimum value " + show(rmin.value_at_root));
}

void regression_gumbel2_half_rates(Outcome& o) {
  const sd::Model m(sd::GumbelII{0.5, 0.5, 0.5});
  const auto mx = sd::find_extremum(m, MeasureKind::mrl, sd::ExtremumKind::maximum);
  o.check(within(mx.t_root, -std::log((69 - 9 * std::sqrt(57.0)) / 2), 1e-6), "mrl maximum at " + show(mx.t_root));
  o.check(within(mx.value_at_root, 0.1062, 0.0005), "mrl maximum value " + show(mx.value_at_root));
}

// Expected verdicts, reliability / hazard / mrl / rhr.
struct Row {
  const char* label;
  sd::ModelParams params;
  std::array<sd::SignVerdict::Kind, 4> kinds;
  std::array<double, 4> thresholds;  // NaN: any positive threshold
};

void verdict_matrix(Outcome& o) {
  using K = sd::SignVerdict::Kind;
  const double any = NAN;
  const double none = 0.0;
  const double pi = std::numbers::pi;
  const std::vector<Row> rows = {
      {"Gumbel I", sd::GumbelI{1, 1, 1},
       {K::always_oa, K::always_ua, K::switch_ua_to_oa, K::switch_ua_to_oa}, {none, none, any, 0.577}},
      {"Gumbel II", sd::GumbelII{1, 1, 0.5},
       {K::param_dependent, K::always_oa, K::always_ua, K::switch_oa_to_ua}, {none, none, none, 0.481}},
      {"Gumbel III", sd::GumbelIII{1, 1, 2}, {K::always_ua, K::always_oa, K::always_ua, K::always_ua}, {}},
      {"Cowan", sd::Cowan{1, 1, pi / 2}, {K::always_ua, K::always_oa, K::always_ua, K::always_ua}, {}},
      {"Marshall-Olkin", sd::MarshallOlkin{1, 1, 1}, {K::always_oa, K::always_ua, K::always_oa, K::always_oa}, {}},
      {"Block-Basu", sd::BlockBasu{1, 1, 1}, {K::always_oa, K::always_ua, K::always_oa, K::always_oa}, {}},
      {"Sarkar", sd::Sarkar{1, 1, 1}, {K::always_oa, K::always_ua, K::always_oa, K::always_oa}, {}},
  };
  for (const Row& row : rows) {
    const sd::Model m(row.params);
    for (std::size_t i = 0; i < 4; ++i) {
      const MeasureKind kind = sd::kAllMeasures[i];
      const sd::SignVerdict got = sd::classify_sign(m, kind);
      const std::string cell = std::string(row.label) + " " + std::string(sd::to_string(kind));
      if (got.kind != row.kinds[i]) {
        o.check(false, cell + ": expected " + std::string(sd::to_string(row.kinds[i])) + ", got " + got.label());
        continue;
      }
      const bool piecewise = row.kinds[i] == K::switch_ua_to_oa || row.kinds[i] == K::switch_oa_to_ua;
      if (!piecewise) continue;
      const double t = got.threshold.value_or(NAN);
      if (std::isnan(row.thresholds[i])) {
        o.check(t > 0, cell + ": threshold " + show(t));
      } else {
        o.check(within(t, row.thresholds[i], 0.002), cell + ": threshold " + show(t));
      }
    }
  }
  // The Gumbel II reliability entry reads UA for alpha > 0 and OA for alpha < 0.
  for (double alpha : {0.5, -0.5}) {
    const sd::Model m(sd::GumbelII{1, 1, alpha});
    for (double t : sd::linspace(0.01, 10.0, 200)) {
      const auto a = sd::assessment_for(sd::relative_error(m, MeasureKind::reliability, t));
      const auto want = alpha > 0 ? sd::Assessment::under : sd::Assessment::over;
      if (a != want) {
        o.check(false, "Gumbel II reliability alpha=" + show(alpha) + " at t=" + show(t));
        break;
      }
    }
  }
}

void oracle_sweep(Outcome& o) {
  const auto grid = sd::linspace(0.05, 5.0, 200);
  std::vector<std::future<std::vector<std::string>>> tasks;
  for (std::size_t idx = 0; idx < 9; ++idx) {
    tasks.push_back(std::async(std::launch::async, [idx, &grid] {
      sd::testing::ParamSampler sampler(1000 + idx);
      std::vector<std::string> failures;
      for (const auto& p : sampler.draws(idx, 50)) {
        const sd::Model m(p);
        for (MeasureKind k : sd::kAllMeasures) {
          const auto r = sd::check_against_oracle(m, k, grid);
          if (!r.passed()) {
            failures.push_back(std::string(m.name()) + " " + std::string(sd::to_string(k)) + " deviation " +
                               show(r.max_rel_dev) + " at t=" + show(r.worst_t));
          }
        }
      }
      return failures;
    }));
  }
  for (auto& t : tasks) {
    for (const auto& f : t.get()) o.check(false, f);
  }
}

void zero_error_models(Outcome& o) {
  sd::testing::ParamSampler sampler(2000);
  const auto grid = sd::linspace(0.05, 5.0, 200);
  for (int i = 0; i < 50; ++i) {
    for (const sd::Model& m : {sd::Model(sampler.draw(4)), sd::Model(sampler.draw(0))}) {
      for (MeasureKind k : sd::kAllMeasures) {
        for (double t : grid) {
          const double e = sd::relative_error(m, k, t);
          if (e != 0.0) {
            o.check(false, std::string(m.name()) + " " + std::string(sd::to_string(k)) + " error " + show(e));
            return;
          }
        }
      }
    }
  }
}

void monotonicity_properties(Outcome& o) {
  sd::testing::ParamSampler sampler(3000);
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const sd::GumbelII p{sampler.rate(), sampler.rate(), sampler.uniform(0.01, 0.95)};
    const double lambda = p.lambda1 + p.lambda2;
    auto f = [&](double t) {
      const auto a = sd::Gumbel2Aux::at(p, t);
      return -a.h_prime / a.h;
    };
    const auto grid = sd::linspace(2.0 / lambda * (1 + 1e-9), 40.0 / lambda, 200);
    for (std::size_t j = 1; j < grid.size(); ++j) violations += f(grid[j]) < f(grid[j - 1]) - 1e-12;
  }
  o.check(violations == 0, "log-slope monotonicity: " + std::to_string(violations) + " violations");

  violations = 0;
  for (int i = 0; i < 100; ++i) {
    const double beta = sampler.uniform(0.1, 5.0);
    const double gamma = sampler.uniform(0.1, 5.0);
    if (beta == gamma) continue;
    const double dir = beta > gamma ? 1.0 : -1.0;
    const auto grid = sd::linspace(0.01, 20.0, 200);
    for (std::size_t j = 1; j < grid.size(); ++j) {
      const double step = sd::rate_mismatch_rhr_error(beta, gamma, grid[j]) -
                          sd::rate_mismatch_rhr_error(beta, gamma, grid[j - 1]);
      violations += dir * step < -1e-12;
    }
  }
  o.check(violations == 0, "rate-mismatch monotonicity: " + std::to_string(violations) + " violations");
}

void degeneracies(Outcome& o) {
  const auto grid = sd::linspace(0.05, 5.0, 200);
  sd::testing::ParamSampler sampler(4000);
  for (int i = 0; i < 20; ++i) {
    const double l1 = sampler.rate();
    const double l2 = sampler.rate();
    const sd::Model ind(sd::Independent{l1, l2});
    const std::pair<const char*, sd::Model> same[] = {
        {"GumbelIII(m=1)", sd::Model(sd::GumbelIII{l1, l2, 1})},
        {"GumbelII(alpha=0)", sd::Model(sd::GumbelII{l1, l2, 0})},
        {"BlockBasu(lambda12=0)", sd::Model(sd::BlockBasu{l1, l2, 0})},
    };
    for (const auto& [name, m] : same) {
      for (double t : grid) {
        for (MeasureKind k : sd::kAllMeasures) {
          const double a = sd::series_measure(m, k, t);
          const double b = sd::series_measure(ind, k, t);
          if (std::abs(a - b) > 1e-14 * std::abs(b)) {
            o.check(false, std::string(name) + " " + std::string(sd::to_string(k)) + " at t=" + show(t));
          }
        }
        const double ja = sd::joint_survival(m, t, 0.5 * t);
        const double jb = sd::joint_survival(ind, t, 0.5 * t);
        if (std::abs(ja - jb) > 1e-14 * jb) o.check(false, std::string(name) + " joint survival at t=" + show(t));
      }
    }
    const sd::Model cowan(sd::Cowan{l1, l2, std::numbers::pi});
    for (double t : grid) {
      for (MeasureKind k : sd::kAllMeasures) {
        const double e = sd::relative_error(cowan, k, t);
        if (std::abs(e) > 1e-14) o.check(false, "Cowan(theta=pi) " + std::string(sd::to_string(k)) + " " + show(e));
      }
    }
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0: no runtime bound
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Gumbel I reversed-hazard crossing and mode", 1.0, regression_gumbel1},
      {2, "Gumbel II hazard and reversed-hazard extrema and crossing", 1.0, regression_gumbel2},
      {3, "Gumbel II mean-residual-life maximum (rates 0.5)", 0.0, regression_gumbel2_half_rates},
      {4, "OA/UA verdict matrix for the seven dependent models", 0.0, verdict_matrix},
      {5, "oracle equivalence over 9 models x 50 random draws", 60.0, oracle_sweep},
      {6, "Freund and Independent relative errors exactly zero", 0.0, zero_error_models},
      {7, "monotonicity properties on random parameters", 0.0, monotonicity_properties},
      {8, "degenerate parameters reproduce independence", 0.0, degeneracies},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
      o.check(false, "runtime " + show(secs) + " s exceeds " + show(c.budget_seconds) + " s");
    }
    failed += !o.pass;
    std::printf("%s criterion %d: %s (%.3f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
