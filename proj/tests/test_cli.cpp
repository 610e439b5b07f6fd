#include "seqbell/cli.hpp"

#include "seqbell/catalog.hpp"
#include "seqbell/strategy_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using namespace seqbell;
namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("seqbell_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    options_.out = dir_;
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  fs::path write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
  cli::Options options_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, EvaluateCatalogEntry) {
  cli::StrategySource src{std::nullopt, "appendixC", {}};
  EXPECT_EQ(cli::run_evaluate(src, std::nullopt, options_, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("2.038615"), std::string::npos) << out_.str();
}

TEST_F(CliTest, EvaluateTsirelsonFile) {
  const auto path = dir_ / "tsirelson.json";
  save_strategy(catalog::lookup("tsirelson"), path);
  cli::StrategySource src{path, "", {}};
  EXPECT_EQ(cli::run_evaluate(src, std::nullopt, options_, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("(2.828427, 1.414214)"), std::string::npos) << out_.str();
}

TEST_F(CliTest, EvaluateEmitsJson) {
  cli::StrategySource src{std::nullopt, "appendixD", {}};
  const auto emitted = dir_ / "triple.json";
  EXPECT_EQ(cli::run_evaluate(src, emitted, options_, out_, err_), cli::kOk);
  EXPECT_NEAR(evaluate_strategy(load_strategy(emitted)).min(),
              evaluate_strategy(catalog::triple_equalized()).min(), 1e-12);
}

TEST_F(CliTest, ExitCodes) {
  cli::StrategySource missing{dir_ / "absent.json", "", {}};
  EXPECT_EQ(cli::run_evaluate(missing, std::nullopt, options_, out_, err_), cli::kNotFound);

  cli::StrategySource unknown{std::nullopt, "no_such_entry", {}};
  EXPECT_EQ(cli::run_evaluate(unknown, std::nullopt, options_, out_, err_), cli::kNotFound);

  const auto bad_schema = write("schema.json", R"({"state": {"kind": "maximally_entangled"}, "oops": 1})");
  EXPECT_EQ(cli::run_evaluate({bad_schema, "", {}}, std::nullopt, options_, out_, err_), cli::kSchemaError);

  auto text = strategy_to_json(catalog::lookup("tsirelson"));
  const auto at = text.find("\"weight\": ") + 10;
  text.replace(at, text.find_first_of(",\n}", at) - at, "0.9");
  const auto bad_weights = write("weights.json", text);
  EXPECT_EQ(cli::run_evaluate({bad_weights, "", {}}, std::nullopt, options_, out_, err_),
            cli::kInvariantViolation);

  EXPECT_EQ(cli::run_boundary("no_such_curve", 0.5, options_, out_, err_), cli::kNotFound);
  EXPECT_EQ(cli::run_reproduce({"no_such_target"}, options_, out_, err_), cli::kNotFound);
}

TEST_F(CliTest, BoundaryCsvIsByteStable) {
  options_.grid = 200;
  ASSERT_EQ(cli::run_boundary("optimal", 0.5, options_, out_, err_), cli::kOk);
  const auto first = slurp(dir_ / "optimal.csv");
  ASSERT_EQ(cli::run_boundary("optimal", 0.5, options_, out_, err_), cli::kOk);
  EXPECT_EQ(slurp(dir_ / "optimal.csv"), first);
  EXPECT_EQ(first.substr(0, first.find('\n')), "s1,s2,provenance");
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 201);
}

TEST_F(CliTest, PartialCurveOutsideRange) {
  EXPECT_EQ(cli::run_boundary("partial_i", 1.2, options_, out_, err_), cli::kInvariantViolation);
}

TEST_F(CliTest, NoiseOnFixedPoint) {
  cli::StrategySource src{std::nullopt, "boundary.fixed_point", {}};
  EXPECT_EQ(cli::run_noise(src, 2.0, options_, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("0.948683"), std::string::npos) << out_.str();
}

TEST_F(CliTest, ReproduceIsDeterministic) {
  ASSERT_EQ(cli::run_reproduce({"boundary", "triple"}, options_, out_, err_), cli::kOk);
  const auto first = out_.str();
  out_.str("");
  ASSERT_EQ(cli::run_reproduce({"boundary", "triple"}, options_, out_, err_), cli::kOk);
  EXPECT_EQ(out_.str(), first);
}

TEST_F(CliTest, OptimizeEmitsStrategy) {
  cli::SpaceRequest req;
  req.restarts = 2;
  req.max_evaluations = 5000;
  const auto emitted = dir_ / "best.json";
  EXPECT_EQ(cli::run_optimize(req, "s2", 2, 0.5, emitted, options_, out_, err_), cli::kOk);
  EXPECT_NEAR(evaluate_strategy(load_strategy(emitted))[0], 0.5, 1e-5);
  EXPECT_EQ(cli::run_optimize(req, "bogus", 2, std::nullopt, std::nullopt, options_, out_, err_), cli::kNotFound);
}

TEST(ParseParams, Pairs) {
  const auto p = cli::parse_params({"phi=0.5", "q=1e-3"});
  EXPECT_DOUBLE_EQ(p.at("phi"), 0.5);
  EXPECT_DOUBLE_EQ(p.at("q"), 1e-3);
  EXPECT_THROW(cli::parse_params({"phi"}), std::invalid_argument);
  EXPECT_THROW(cli::parse_params({"phi=abc"}), std::invalid_argument);
  EXPECT_THROW(cli::parse_params({"=1"}), std::invalid_argument);
}

TEST(ReproduceTargets, Listed) {
  const auto& t = cli::reproduce_targets();
  for (const char* name : {"boundary", "fig2", "insets", "triple", "independent", "noise", "appendixB_fig"}) {
    EXPECT_NE(std::find(t.begin(), t.end(), name), t.end()) << name;
  }
}

}  // namespace
