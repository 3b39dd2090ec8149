#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nls_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nls::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nls_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::string& exp, const json& cfg, const fs::path& dir) {
  std::ostringstream out, err;
  const int code = run_experiment_json(exp, cfg, dir.string(), out, err);
  return {code, out.str(), err.str()};
}

json eigen_constant() {
  return json::parse(R"({
    "domain": {"interval": [-1, 1], "n": 40},
    "field": {"preset": "constant", "matrix": [[2, 1], [1, 2]]},
    "kernels": "uniform",
    "rates": 0,
    "params": {"expect_lambda": -3, "expect_tol": 1e-10}
  })");
}

}  // namespace

TEST(Cli, ExperimentCatalog) {
  const auto& names = experiment_names();
  EXPECT_EQ(names.size(), 12u);
  EXPECT_EQ(names.front(), "validate-kernel");
  std::ostringstream a, b;
  list_presets(a);
  list_presets(b);
  EXPECT_EQ(a.str(), b.str());
  for (const char* want : {"trapezoid", "counterexample_2sp", "gauss_cutoff", "rank-one", "gradient-ineq"})
    EXPECT_NE(a.str().find(want), std::string::npos) << want;
}

TEST(Cli, DigestIgnoresKeyOrderAndWhitespace) {
  const json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  const json b = json::parse("{ \"a\":[1,2],\n\"b\":1 }");
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 16u);
  EXPECT_NE(config_digest(a), config_digest(json::parse(R"({"b": 2, "a": [1, 2]})")));
  // FNV-1a 64 of "{}"
  EXPECT_EQ(config_digest(json::object()), "08f44b07b5901a25");
}

TEST(Cli, EigenConstantPasses) {
  const fs::path dir = scratch("eigen");
  const Outcome r = run("eigen", eigen_constant(), dir);
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_EQ(r.out.rfind("eigen: PASS", 0), 0u);
  const json v = json::parse(slurp(dir / "verdict.json"));
  EXPECT_EQ(v["experiment"], "eigen");
  EXPECT_TRUE(v["all_pass"].get<bool>());
  EXPECT_EQ(v["config_digest"], config_digest(eigen_constant()));
  EXPECT_NEAR(v["results"]["lambda_p"].get<double>(), -3.0, 1e-10);
  const std::string csv = slurp(dir / "eigenvector.csv");
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "spectrum.csv"));
}

TEST(Cli, ReRunsAreByteIdentical) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  json cfg = json::parse(R"({
    "domain": {"interval": [-1, 1], "n": 60},
    "field": {"preset": "random", "species": 2},
    "seed": 12,
    "kernels": ["uniform", "triangle"],
    "params": {"d_values": [0.001, 0.01, 0.1]}
  })");
  ASSERT_EQ(run("sweep-d", cfg, a).code, kExitPass);
  ASSERT_EQ(run("sweep-d", cfg, b).code, kExitPass);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_GE(files, 2u);
}

TEST(Cli, RankOneVerdicts) {
  const fs::path dir = scratch("rank");
  const json cfg = json::parse(R"J({"params": {"potential": "-sqrt(x)", "interval": [0, 0.2],
    "expect_verdict": "no_eigenfunction", "expect_i0": 0.894427}})J");
  const Outcome r = run("rank-one", cfg, dir);
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const json v = json::parse(slurp(dir / "verdict.json"));
  EXPECT_NEAR(v["results"]["i0"].get<double>(), 0.894427190999915878564, 1e-9);
}

TEST(Cli, FailedCheckExitsTwo) {
  json cfg = eigen_constant();
  cfg["params"]["expect_lambda"] = -2.5;
  const fs::path dir = scratch("fail");
  const Outcome r = run("eigen", cfg, dir);
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.err.find("check failed"), std::string::npos);
  EXPECT_FALSE(json::parse(slurp(dir / "verdict.json"))["all_pass"].get<bool>());
}

TEST(Cli, InvalidInputsExitOne) {
  const fs::path dir = scratch("bad");
  const json unsorted = json::parse(R"({
    "domain": {"interval": [-1, 1], "n": 20},
    "field": {"preset": "constant", "matrix": [[2, 1], [1, 2]]},
    "kernels": "uniform",
    "params": {"d_values": [1, 0.1]}
  })");
  Outcome r = run("sweep-d", unsorted, dir);
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("sorted"), std::string::npos);

  r = run("no-such-experiment", unsorted, dir);
  EXPECT_EQ(r.code, kExitError);

  json wrong = eigen_constant();
  wrong["experiment"] = "bump";
  EXPECT_EQ(run("eigen", wrong, dir).code, kExitError);

  json missing = eigen_constant();
  missing.erase("field");
  r = run("eigen", missing, dir);
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("'field'"), std::string::npos);

  json noncoop = eigen_constant();
  noncoop["field"]["matrix"] = json::parse("[[1, 0], [0, 1]]");
  EXPECT_EQ(run("eigen", noncoop, dir).code, kExitError);
}

TEST(Cli, ParseErrorReportsLineAndColumn) {
  const fs::path dir = scratch("parse");
  fs::create_directories(dir);
  const fs::path cfg = dir / "bad.json";
  std::ofstream(cfg) << "{\n  \"domain\": {\"n\": 4,}\n}\n";
  std::ostringstream out, err;
  EXPECT_EQ(run_experiment("eigen", cfg.string(), (dir / "out").string(), out, err), kExitError);
  EXPECT_NE(err.str().find("bad.json:2:"), std::string::npos) << err.str();
  std::ostringstream out2, err2;
  EXPECT_EQ(run_experiment("eigen", (dir / "missing.json").string(), dir.string(), out2, err2), kExitError);
}
