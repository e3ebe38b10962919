#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli_app.hpp"

namespace sd = seriesdep;
namespace cli = seriesdep::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "seriesdep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
  return out;
}

std::string temp_path(const std::string& name) { return std::string(SERIESDEP_TEST_TMPDIR) + "/" + name; }

}  // namespace

TEST(Grid, Parsing) {
  const auto g = cli::parse_grid("0:5:100");
  EXPECT_EQ(g.steps, 100);
  EXPECT_EQ(g.t_max, 5.0);
  EXPECT_THROW(cli::parse_grid("0:5"), sd::DomainError);
  EXPECT_THROW(cli::parse_grid("5:0:10"), sd::DomainError);
  EXPECT_THROW(cli::parse_grid("0:5:1"), sd::DomainError);
  EXPECT_THROW(cli::parse_grid("0:5x:10"), sd::DomainError);
}

TEST(Measures, IndependentTable) {
  const auto r = run({"measures", "--model", "independent", "--lambda1", "1", "--lambda2", "1", "--t", "0:5:100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 101u);
  EXPECT_EQ(ls[0], "t,reliability,hazard,mrl,rhr");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto cells = split(ls[i]);
    ASSERT_EQ(cells.size(), 5u);
    const double t = std::stod(cells[0]);
    EXPECT_NEAR(std::stod(cells[1]), std::exp(-2 * t), 1e-15);
  }
  EXPECT_EQ(split(ls[1])[4], "nan");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Measures, GumbelIHazardColumn) {
  const auto r = run({"measures", "--model", "gumbel1", "--lambda1", "1", "--lambda2", "1", "--lambda12", "1",
                      "--t", "0:2:5", "--kind", "hazard"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[0], "t,hazard");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    EXPECT_DOUBLE_EQ(std::stod(c[1]), 2 + 2 * std::stod(c[0]));
  }
}

TEST(Measures, SeventeenDigitFormatting) {
  const auto r = run({"measures", "--model", "independent", "--lambda1", "1", "--lambda2", "2", "--t", "0:1:2",
                      "--kind", "mrl"});
  EXPECT_EQ(lines(r.out)[1], "0,0.33333333333333331");
}

TEST(Measures, InvalidParameterExitsTwo) {
  const auto r = run({"measures", "--model", "gumbel2", "--lambda1", "1", "--lambda2", "1", "--alpha", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("alpha"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Measures, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"measures"}).code, 2);
  EXPECT_EQ(run({"measures", "--model", "nope"}).code, 2);
  EXPECT_EQ(run({"measures", "--model", "independent", "--lambda1", "x"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"measures", "--model", "independent", "--lambda1", "1", "--lambda2", "1", "--format", "xml"}).code,
            2);
}

TEST(Measures, AbscissaX) {
  const auto r = run({"measures", "--model", "independent", "--lambda1", "1", "--lambda2", "1", "--t", "0:1:2",
                      "--abscissa", "x"});
  const auto ls = lines(r.out);
  EXPECT_EQ(split(ls[0])[0], "x");
  EXPECT_EQ(split(ls[1])[0], "1");
  EXPECT_DOUBLE_EQ(std::stod(split(ls[2])[0]), std::exp(-1.0));
}

TEST(Errors, GumbelIIReliabilityAndFooter) {
  const auto r = run({"errors", "--model", "gumbel2", "--lambda1", "1", "--lambda2", "1", "--alpha", "0.5",
                      "--t", "0:3:4", "--kind", "reliability"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 6u);
  EXPECT_EQ(ls.back(), "asymptote,0.5");
  for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
    const auto c = split(ls[i]);
    const double u = -std::expm1(-std::stod(c[0]));
    EXPECT_NEAR(std::stod(c[1]), 0.5 * u * u, 1e-15);
  }
}

TEST(Errors, FreundAllZero) {
  const auto r = run({"errors", "--model", "freund", "--lambda1", "1", "--lambda2", "1", "--theta1", "0.3",
                      "--theta2", "0.7", "--t", "0.5:3:6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    for (std::size_t j = 1; j < c.size(); ++j) EXPECT_EQ(c[j], "0");
  }
}

TEST(Errors, GumbelIIIConstantHazardError) {
  const auto r = run({"errors", "--model", "gumbel3", "--lambda1", "1", "--lambda2", "1", "--m", "2",
                      "--t", "0:5:6", "--kind", "hazard"});
  const auto ls = lines(r.out);
  for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
    EXPECT_NEAR(std::stod(split(ls[i])[1]), (std::sqrt(2.0) - 2) / 2, 1e-15);
  }
}

TEST(Errors, DivergentAsymptoteIsNone) {
  const auto r = run({"errors", "--model", "gumbel3", "--lambda1", "1", "--lambda2", "1", "--m", "2"});
  EXPECT_EQ(split(lines(r.out).back())[1], "none");
}

TEST(Signs, MarshallOlkinRow) {
  const auto r = run({"signs", "--model", "marshall-olkin", "--lambda1", "1", "--lambda2", "1", "--lambda12", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[0], "model,reliability,hazard,mrl,rhr");
  EXPECT_EQ(ls[1], "marshall-olkin,OA,UA,OA,OA");
}

TEST(Signs, AllModels) {
  const auto r = run({"signs", "--all"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 10u);
}

TEST(Crossings, GumbelIRhr) {
  const auto r = run({"crossings", "--model", "gumbel1", "--lambda1", "1", "--lambda2", "1", "--lambda12", "1",
                      "--kind", "rhr"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 2u);
  const auto c = split(ls[1]);
  EXPECT_EQ(c[0], "rhr");
  EXPECT_EQ(c[1], "crossing");
  EXPECT_NEAR(std::stod(c[2]), 0.577, 0.002);
}

TEST(Crossings, MissingRootExitsThree) {
  const auto r = run({"crossings", "--model", "marshall-olkin", "--lambda1", "1", "--lambda2", "1",
                      "--lambda12", "1", "--kind", "mrl"});
  EXPECT_EQ(r.code, 3);
}

TEST(Verify, SingleModelJson) {
  const auto r = run({"verify", "--model", "cowan", "--lambda1", "1", "--lambda2", "1", "--theta", "1.5",
                      "--grid", "0.05:5:20", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 4u);
  for (const auto& rep : j) EXPECT_LE(rep["max_rel_dev"].get<double>(), rep["tolerance"].get<double>());
}

TEST(Verify, AllModels) {
  const auto r = run({"verify", "--all", "--grid", "0.05:5:200"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u + 9u * 4u);
  EXPECT_EQ(split(ls[1])[0], "independent");
  EXPECT_EQ(split(ls.back())[0], "sarkar");
}

TEST(Config, JsonMatchesFlagsByteForByte) {
  const std::string path = temp_path("gumbel2.json");
  {
    std::ofstream f(path);
    f << R"({"model": "gumbel2", "lambda1": 0.7, "lambda2": 1.3, "alpha": -0.4})";
  }
  for (const char* sub : {"measures", "errors"}) {
    const auto a = run({sub, "--config", path, "--t", "0:4:50"});
    const auto b = run({sub, "--model", "gumbel2", "--lambda1", "0.7", "--lambda2", "1.3", "--alpha", "-0.4",
                        "--t", "0:4:50"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Config, OverridesFlags) {
  const std::string path = temp_path("indep.json");
  {
    std::ofstream f(path);
    f << R"({"model": "independent", "lambda1": 2, "lambda2": 2})";
  }
  const auto r = run({"measures", "--config", path, "--model", "gumbel1", "--lambda1", "1", "--t", "0:1:2",
                      "--kind", "hazard"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[1], "0,4");
}

TEST(Config, BadDocuments) {
  const std::string path = temp_path("bad.json");
  {
    std::ofstream f(path);
    f << R"({"model": "independent", "lambda1": 2, "lambda2": 2, "rho": 1})";
  }
  EXPECT_EQ(run({"measures", "--config", path}).code, 2);
  {
    std::ofstream f(path);
    f << "{not json";
  }
  EXPECT_EQ(run({"measures", "--config", path}).code, 2);
  EXPECT_EQ(run({"measures", "--config", temp_path("missing.json")}).code, 2);
}

TEST(Output, WritesFile) {
  const std::string path = temp_path("out.csv");
  const auto r = run({"measures", "--model", "independent", "--lambda1", "1", "--lambda2", "1", "--t", "0:1:3",
                      "--output", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(lines(ss.str()).size(), 4u);
}

TEST(Json, ModelRoundTrip) {
  for (const auto& p : sd::representative_params()) {
    const auto j = sd::model_to_json(p);
    EXPECT_EQ(sd::model_to_json(sd::model_from_json(j)), j);
  }
  EXPECT_THROW(sd::model_from_json_text("[]"), sd::DomainError);
  EXPECT_THROW(sd::model_from_json_text(R"({"model": "independent", "lambda1": "1", "lambda2": 1})"),
               sd::DomainError);
}
