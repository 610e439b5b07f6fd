#include "seqbell/strategy_io.hpp"

#include "seqbell/catalog.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace {

using namespace seqbell;

TEST(StrategyIo, CatalogRoundTrip) {
  for (const auto& entry : catalog::entries()) {
    const auto original = catalog::lookup(entry.id);
    const auto text = strategy_to_json(original);
    const auto back = strategy_from_json(text);
    const auto p = evaluate_strategy(original);
    const auto q = evaluate_strategy(back);
    ASSERT_EQ(p.size(), q.size()) << entry.id;
    for (Eigen::Index k = 0; k < p.size(); ++k) EXPECT_NEAR(p[k], q[k], 1e-12) << entry.id;
    EXPECT_EQ(strategy_to_json(back), text) << entry.id;
  }
}

TEST(StrategyIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "seqbell_io_roundtrip.json";
  const auto s = catalog::triple_equalized();
  save_strategy(s, path);
  const auto back = load_strategy(path);
  EXPECT_NEAR(evaluate_strategy(back).min(), evaluate_strategy(s).min(), 1e-12);
  std::filesystem::remove(path);
}

TEST(StrategyIo, MissingFile) {
  EXPECT_THROW(load_strategy("/nonexistent/strategy.json"), std::ios_base::failure);
}

constexpr const char* kMinimal = R"({
  "state": {"kind": "maximally_entangled"},
  "branches": [{
    "weight": 1.0,
    "a_angles": [0.7853981633974483, -0.7853981633974483],
    "instruments": [[{"rank": "basis", "angle": 0.0}, {"rank": "basis", "angle": 1.5707963267948966}]],
    "final_angles": [0.0, 1.5707963267948966]
  }]
})";

TEST(StrategyIo, DefaultsForUnitaries) {
  const auto s = strategy_from_json(kMinimal);
  EXPECT_NEAR(evaluate_strategy(s)[0], 2 * std::numbers::sqrt2, 1e-12);
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

TEST(StrategyIo, SchemaErrors) {
  EXPECT_THROW(strategy_from_json("not json"), SchemaError);
  EXPECT_THROW(strategy_from_json("[]"), SchemaError);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"weight\"", "\"wieght\"")), SchemaError);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"basis\", \"angle\": 0.0", "\"rank2\"")), SchemaError);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"maximally_entangled\"", "\"ghz\"")), SchemaError);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"weight\": 1.0", "\"weight\": \"one\"")), SchemaError);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"final_angles\": [0.0, ", "\"final_angles\": [")),
               SchemaError);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"weight\": 1.0,", "\"weight\": 1.0, \"extra\": 1,")),
               SchemaError);
}

TEST(StrategyIo, InvariantErrors) {
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"weight\": 1.0", "\"weight\": 0.9")),
               std::invalid_argument);
  EXPECT_THROW(strategy_from_json(replaced(kMinimal, "\"weight\": 1.0", "\"weight\": -1.0")),
               std::invalid_argument);
}

}  // namespace
