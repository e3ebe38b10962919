#pragma once

// Command-line front end: tabulates measures and relative errors, prints
// sign verdicts and crossings, and runs the oracle verification suite.
//
// Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seriesdep/json_io.hpp"
#include "seriesdep/seriesdep.hpp"

namespace seriesdep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitVerify = 4;

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 5.0;
  int steps = 101;

  std::vector<double> points() const { return linspace(t_min, t_max, steps); }
};

/// Parses "MIN:MAX:STEPS".
inline TimeGrid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) {
    throw DomainError("time grid must look like MIN:MAX:STEPS, got '" + text + "'");
  }
  TimeGrid g;
  try {
    std::size_t used = 0;
    g.t_min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    g.t_max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    g.steps = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::logic_error&) {
    throw DomainError("time grid must look like MIN:MAX:STEPS, got '" + text + "'");
  }
  if (!(g.t_min >= 0.0) || !(g.t_min < g.t_max) || !std::isfinite(g.t_max)) {
    throw DomainError("time grid needs 0 <= MIN < MAX");
  }
  if (g.steps < 2) {
    throw DomainError("time grid needs at least 2 steps");
  }
  return g;
}

/// Everything a subcommand needs, gathered from flags or a JSON config.
struct RunConfig {
  std::string model_name;
  FieldMap fields;
  std::string config_path;
  std::string t_spec = "0:5:101";
  std::string grid_spec = "0.05:5:200";
  std::string kind;
  std::string format = "csv";
  std::string output;
  std::string abscissa = "t";
  bool all = false;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline Model resolve_model(const RunConfig& cfg) {
  if (!cfg.config_path.empty()) {
    std::ifstream in(cfg.config_path);
    if (!in) throw DomainError("cannot read config file '" + cfg.config_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return Model(model_from_json_text(buffer.str()));
  }
  if (cfg.model_name.empty()) {
    throw DomainError("a model is required: pass --model or --config");
  }
  return Model(params_from_fields(cfg.model_name, cfg.fields));
}

inline std::vector<Model> resolve_models(const RunConfig& cfg) {
  if (!cfg.all) return {resolve_model(cfg)};
  std::vector<Model> models;
  for (const auto& p : representative_params()) models.emplace_back(p);
  return models;
}

inline std::vector<MeasureKind> resolve_kinds(const RunConfig& cfg) {
  if (cfg.kind.empty()) return {kAllMeasures.begin(), kAllMeasures.end()};
  return {parse_measure_kind(cfg.kind)};
}

// A table rendered either as CSV (header, rows, LF endings) or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> footer;  // CSV only; JSON carries it separately

  void write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
      out << '\n';
    }
    if (!footer.empty()) {
      for (std::size_t i = 0; i < footer.size(); ++i) out << (i ? "," : "") << footer[i];
      out << '\n';
    }
  }

  nlohmann::json rows_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json r = nlohmann::json::array();
      for (double v : row) r.push_back(json_number(v));
      rs.push_back(r);
    }
    return rs;
  }
};

inline double abscissa_value(const RunConfig& cfg, double t) {
  return cfg.abscissa == "x" ? std::exp(-t) : t;
}

inline void check_common(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") {
    throw DomainError("--format must be csv or json");
  }
  if (cfg.abscissa != "t" && cfg.abscissa != "x") {
    throw DomainError("--abscissa must be t or x");
  }
}

inline void cmd_measures(const RunConfig& cfg, std::ostream& out) {
  const Model model = resolve_model(cfg);
  const auto kinds = resolve_kinds(cfg);
  Table table;
  table.columns.push_back(cfg.abscissa);
  for (MeasureKind k : kinds) table.columns.emplace_back(to_string(k));
  for (double t : parse_grid(cfg.t_spec).points()) {
    std::vector<double> row{abscissa_value(cfg, t)};
    for (MeasureKind k : kinds) {
      row.push_back(k == MeasureKind::rhr && t < kRhrMinTime ? NAN : series_measure(model, k, t));
    }
    table.rows.push_back(std::move(row));
  }
  if (cfg.format == "csv") {
    table.write_csv(out);
  } else {
    nlohmann::json j = {{"model", model_to_json(model.params())},
                        {"columns", table.columns},
                        {"rows", table.rows_json()}};
    out << j.dump(2) << '\n';
  }
}

inline void cmd_errors(const RunConfig& cfg, std::ostream& out) {
  const Model model = resolve_model(cfg);
  const auto kinds = resolve_kinds(cfg);
  Table table;
  table.columns.push_back(cfg.abscissa);
  table.footer.push_back("asymptote");
  nlohmann::json asymptotes = nlohmann::json::object();
  for (MeasureKind k : kinds) {
    table.columns.emplace_back(to_string(k));
    const auto a = asymptote(model, k);
    table.footer.push_back(a ? format_number(*a) : "none");
    asymptotes[std::string(to_string(k))] = a ? nlohmann::json(*a) : nlohmann::json(nullptr);
  }
  for (double t : parse_grid(cfg.t_spec).points()) {
    std::vector<double> row{abscissa_value(cfg, t)};
    for (MeasureKind k : kinds) {
      row.push_back(k == MeasureKind::rhr && t < kRhrMinTime ? NAN : relative_error(model, k, t));
    }
    table.rows.push_back(std::move(row));
  }
  if (cfg.format == "csv") {
    table.write_csv(out);
  } else {
    nlohmann::json j = {{"model", model_to_json(model.params())},
                        {"columns", table.columns},
                        {"rows", table.rows_json()},
                        {"asymptote", asymptotes}};
    out << j.dump(2) << '\n';
  }
}

inline void cmd_signs(const RunConfig& cfg, std::ostream& out) {
  const auto models = resolve_models(cfg);
  const auto kinds = resolve_kinds(cfg);
  nlohmann::json doc = nlohmann::json::array();
  if (cfg.format == "csv") {
    out << "model";
    for (MeasureKind k : kinds) out << ',' << to_string(k);
    out << '\n';
  }
  for (const Model& model : models) {
    nlohmann::json verdicts = nlohmann::json::object();
    if (cfg.format == "csv") out << model.name();
    for (MeasureKind k : kinds) {
      const SignVerdict v = classify_sign(model, k);
      if (cfg.format == "csv") out << ',' << v.label();
      verdicts[std::string(to_string(k))] = to_json(v);
    }
    if (cfg.format == "csv") out << '\n';
    doc.push_back({{"model", model_to_json(model.params())}, {"verdicts", verdicts}});
  }
  if (cfg.format == "json") out << doc.dump(2) << '\n';
}

inline void cmd_crossings(const RunConfig& cfg, std::ostream& out) {
  const Model model = resolve_model(cfg);
  const bool explicit_kind = !cfg.kind.empty();
  nlohmann::json doc = nlohmann::json::array();
  if (cfg.format == "csv") {
    out << "kind,type,t,value,bracket_lo,bracket_hi,iterations,residual,at_boundary\n";
  }
  auto emit = [&](MeasureKind k, const char* type, const CrossingReport& r) {
    if (cfg.format == "csv") {
      out << to_string(k) << ',' << type << ',' << format_number(r.t_root) << ','
          << format_number(r.value_at_root) << ',' << format_number(r.bracket.lo) << ','
          << format_number(r.bracket.hi) << ',' << r.iterations << ','
          << format_number(r.residual) << ',' << (r.at_boundary ? "true" : "false") << '\n';
    } else {
      nlohmann::json j = to_json(r);
      j["kind"] = std::string(to_string(k));
      j["type"] = type;
      doc.push_back(j);
    }
  };
  for (MeasureKind k : resolve_kinds(cfg)) {
    try {
      emit(k, "crossing", find_crossing(model, k));
    } catch (const BracketError&) {
      // No zero crossing is a fact about the curve; only an explicitly
      // requested measure turns it into a failure.
      if (explicit_kind) throw;
    }
    try {
      emit(k, "extremum", find_extremum(model, k));
    } catch (const FlatError&) {
    }
  }
  if (cfg.format == "json") out << doc.dump(2) << '\n';
}

/// Returns false if any report exceeds its tolerance.
inline bool cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto models = resolve_models(cfg);
  const auto grid = parse_grid(cfg.grid_spec).points();
  const auto kinds = resolve_kinds(cfg);

  // One task per model; results are collected in model order.
  std::vector<std::future<std::vector<OracleReport>>> tasks;
  for (const Model& model : models) {
    tasks.push_back(std::async(std::launch::async, [&grid, &kinds, model] {
      std::vector<OracleReport> reports;
      for (MeasureKind k : kinds) reports.push_back(check_against_oracle(model, k, grid));
      return reports;
    }));
  }
  bool ok = true;
  nlohmann::json doc = nlohmann::json::array();
  if (cfg.format == "csv") out << "model,kind,max_rel_dev,worst_t,tolerance,status\n";
  for (auto& task : tasks) {
    for (const OracleReport& r : task.get()) {
      ok = ok && r.passed();
      if (cfg.format == "csv") {
        out << model_name(r.model) << ',' << to_string(r.kind) << ',' << format_number(r.max_rel_dev)
            << ',' << format_number(r.worst_t) << ',' << format_number(r.tolerance) << ','
            << (r.passed() ? "ok" : "FAIL") << '\n';
      } else {
        doc.push_back(to_json(r));
      }
    }
  }
  if (cfg.format == "json") out << doc.dump(2) << '\n';
  return ok;
}

inline void add_common_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--model", cfg.model_name, "Model name (independent, gumbel1, gumbel2, gumbel3, "
                                            "freund, marshall-olkin, block-basu, cowan, sarkar)");
  for (std::string_view field : kParameterFields) {
    const std::string name(field);
    sub.add_option_function<double>(
        "--" + name, [&cfg, name](const double& v) { cfg.fields[name] = v; },
        "Model parameter " + name);
  }
  sub.add_option("--config", cfg.config_path, "JSON model document; overrides model flags");
  sub.add_option("--kind", cfg.kind, "Restrict to one measure: reliability, hazard, mrl, rhr");
  sub.add_option("--format", cfg.format, "Output format: csv or json");
  sub.add_option("--output", cfg.output, "Write to this file instead of stdout");
}

/// Runs the command line and returns its exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Series-system reliability under dependent exponential lifetimes"};
  app.require_subcommand(1);

  auto* measures = app.add_subcommand("measures", "Reliability, hazard, MRL and RHR of the series system");
  auto* errors = app.add_subcommand("errors", "Relative errors of assuming independence");
  auto* signs = app.add_subcommand("signs", "Over/under-assessment verdicts");
  auto* crossings = app.add_subcommand("crossings", "Zero crossings and extrema of the error curves");
  auto* verify = app.add_subcommand("verify", "Check closed forms against quadrature and differences");
  for (CLI::App* sub : {measures, errors, signs, crossings, verify}) add_common_options(*sub, cfg);
  for (CLI::App* sub : {measures, errors}) {
    sub->add_option("--t", cfg.t_spec, "Time grid MIN:MAX:STEPS");
    sub->add_option("--abscissa", cfg.abscissa, "First column: t or x = exp(-t)");
  }
  for (CLI::App* sub : {signs, verify}) {
    sub->add_flag("--all", cfg.all, "Use one representative parameter set per model");
  }
  verify->add_option("--grid", cfg.grid_spec, "Time grid MIN:MAX:STEPS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    check_common(cfg);
    if (measures->parsed()) cmd_measures(cfg, buffer);
    if (errors->parsed()) cmd_errors(cfg, buffer);
    if (signs->parsed()) cmd_signs(cfg, buffer);
    if (crossings->parsed()) cmd_crossings(cfg, buffer);
    if (verify->parsed() && !cmd_verify(cfg, buffer)) code = kExitVerify;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }

  if (cfg.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kExitDomain;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace seriesdep::cli
